"""Allow running ppbound as a module: python -m ppbound."""

from ppbound.cli import main

if __name__ == "__main__":
    main()
