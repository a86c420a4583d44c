# Main entry point for strongprop
import sys

from src.cli import main

if __name__ == "__main__":
    sys.exit(main())
