#!/usr/bin/env python3
"""
edbounds entry point
Runs the backend command line from the repository root, e.g.

    python main.py bound pgl --p 3 --s 2
"""

import os
import sys

if __name__ == "__main__":
    # Make sure the backend package is importable from the root directory
    script_dir = os.path.dirname(os.path.abspath(__file__))
    backend_dir = os.path.join(script_dir, "backend")
    if not os.path.isdir(backend_dir):
        print("Error: Backend directory not found.")
        sys.exit(1)
    sys.path.insert(0, backend_dir)

    from app.main import run

    sys.exit(run(sys.argv[1:]))
