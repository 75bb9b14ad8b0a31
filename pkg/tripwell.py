"""
tripwell launcher
รันจากรากโปรเจกต์: python tripwell.py eigen --g -0.4 ...
"""
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent / "src"))

from main import main

if __name__ == "__main__":
    sys.exit(main())
