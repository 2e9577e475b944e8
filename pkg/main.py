"""Main entry point for ppbound."""

from ppbound.cli import main

if __name__ == "__main__":
    main()
