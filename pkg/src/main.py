import sys

from src.cli.experiment_runner import main

if __name__ == "__main__":
    sys.exit(main())
