#!/usr/bin/env python3
"""
spacing-lab command line entry point
Run: python run.py --help
"""
from spacing_lab import create_app

cli = create_app()

if __name__ == '__main__':
    cli()
