"""
Quick Diagnostic Script
ตรวจสอบความถูกต้องเบื้องต้นของ tripwell (รันเร็ว ไม่กี่วินาทีถึงนาที)
"""
import sys
from pathlib import Path
sys.path.insert(0, str(Path(__file__).parent / 'src'))

import logging

import numpy as np

from core.config import config
from core.model import ModelParams
from core.stationary import find_stationary_states
from experiments.lz import LZConfig, lz_formula, run_equal_slope
from experiments.stirap import HornScenario, StirapConfig, horn_scenario, run_stirap

logging.basicConfig(level=logging.WARNING)
logger = logging.getLogger(__name__)

print("""
╔═══════════════════════════════════════════════════════════╗
║          tripwell Diagnostic                              ║
║          ตรวจสอบ eigen solver, LZ, STIRAP                 ║
╚═══════════════════════════════════════════════════════════╝
""")


def section(title):
    print("\n" + "=" * 60)
    print(f"🔍 {title}")
    print("=" * 60)


def check_linear_oracle():
    """g = 0: stationary states ต้องตรงกับ eigh ของเมทริกซ์ 3x3"""
    section("1. Linear eigen oracle")
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(10):
        eps, delta, v, w = rng.uniform(-1.0, 1.0, 4)
        params = ModelParams(epsilon=eps, delta=delta, v=v, w=w)
        states = find_stationary_states(params)
        if len(states) != 3:
            print(f"❌ {params}: found {len(states)} states")
            return False
        exact = np.linalg.eigvalsh(params.linear_matrix())
        worst = max(worst, float(np.max(np.abs([s.mu for s in states] - exact))))
    ok = worst < 1e-9
    print(f"{'✅' if ok else '❌'} max |mu - lambda| = {worst:.2e}")
    return ok


def check_linear_lz():
    """g = 0: P ต้องใกล้สูตร Landau-Zener"""
    section("2. Linear Landau-Zener")
    alpha = 0.05
    result = run_equal_slope(LZConfig(delta=-0.4, v=0.1, w=0.2, g=0.0, alpha=alpha), samples=2)
    expected = lz_formula(0.1, alpha)
    error = abs(result.P - expected) / expected
    ok = error < 0.05
    print(f"{'✅' if ok else '❌'} P = {result.P:.4f}, formula = {expected:.4f} (relative error {error:.2%})")
    return ok


def check_stirap_gate():
    """g = 0 กับพัลส์ค่าเริ่มต้น: efficiency > 0.999"""
    section("3. STIRAP gate")
    result = run_stirap(StirapConfig(detuning=0.1, g=0.0), samples=2)
    ok = result.efficiency > 0.999
    print(f"{'✅' if ok else '❌'} efficiency = {result.efficiency:.6f} "
          f"(window [{config.stirap.t_start:g}, {config.stirap.t_end:g}])")
    return ok


def check_horn_table():
    """ตารางเงื่อนไข horn state"""
    section("4. Horn scenarios")
    cases = [
        ((0.2, 0.1), HornScenario.SAME_SIGN),
        ((0.05, 0.1), HornScenario.NO_HORN),
        ((-0.2, 0.1), HornScenario.OPPOSITE_SIGN),
        ((0.0, 0.1), HornScenario.NO_HORN),
    ]
    ok = True
    for (g, delta), expected in cases:
        got = horn_scenario(g, delta)
        good = got is expected
        ok &= good
        print(f"{'✅' if good else '❌'} g={g:+.2f}, Delta={delta:+.2f} -> {got.value}")
    return ok


def main():
    """Main function"""
    results = {
        'linear oracle': check_linear_oracle(),
        'linear LZ': check_linear_lz(),
        'STIRAP gate': check_stirap_gate(),
        'horn table': check_horn_table(),
    }

    print("\n" + "=" * 60)
    print("📋 Summary")
    print("=" * 60)
    for name, ok in results.items():
        print(f"{'✅' if ok else '❌'} {name}")
    return 0 if all(results.values()) else 1


if __name__ == "__main__":
    try:
        sys.exit(main())
    except KeyboardInterrupt:
        print("\n\n🛑 Cancelled")
    except Exception as e:
        print(f"\n❌ Error: {e}")
        import traceback
        traceback.print_exc()
        sys.exit(1)
