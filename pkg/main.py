"""
Nichols Algebra Engine - Main Entry Point
Run `python main.py --help` for the subcommands, `python main.py serve` for the API
"""

from app.cli import main

if __name__ == "__main__":
    main()
