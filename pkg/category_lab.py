"""
Category Lab - Command Line Entry Point
Run: python category_lab.py growth --sizes 1,2,4
"""

import os
import sys

# Add parent directory to path for imports
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from src.cli import main

if __name__ == "__main__":
    raise SystemExit(main())
