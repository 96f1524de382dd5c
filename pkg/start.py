#!/usr/bin/env python3
"""
mbset engine launcher

Starts the FastAPI service (uvicorn) on PORT. The command-line surface lives in
`python -m app.cli`.
"""

import os
import subprocess
import sys

def start_backend_foreground():
    """Run the FastAPI app on the public PORT (uvicorn)"""
    port = os.getenv("PORT", "8000")
    print(f"mbset engine starting on port {port}")
    subprocess.run([
        sys.executable,
        "-m",
        "uvicorn",
        "app.main:app",
        "--host", "0.0.0.0",
        "--port", port,
    ])

if __name__ == "__main__":
    start_backend_foreground()
