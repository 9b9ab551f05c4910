"""
fracdg v1.0.0

DG time stepping for fractional diffusion-wave equations.

Usage: uv run main.py {solve,sweep,tables,figures} ...
"""

from fracdg.cli import main

if __name__ == "__main__":
    main()
