"""
Console entry point
Runs the liecurv command line (roots, auto3, curv) from a checkout
"""
import os
import sys

# Add the current directory to Python path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

from cli import main

if __name__ == "__main__":
    sys.exit(main())
