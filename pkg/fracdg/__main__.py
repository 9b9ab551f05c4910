"""Entry point for python -m fracdg."""

from fracdg.cli import main

if __name__ == "__main__":
    main()
