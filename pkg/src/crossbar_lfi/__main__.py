"""Allow running the simulator with python -m crossbar_lfi."""

from .cli import main

if __name__ == "__main__":
    main()
