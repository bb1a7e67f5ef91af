"""
Command line round trip
=======================

Analyze a level, export its Eisenstein component as a JSON table, then feed
the table back through the general import path.  Same as running

    conglab analyze --level 113 --prime 2 --export-table t.json
    conglab import --table t.json
"""

import json
import tempfile
from pathlib import Path

from conglab.cli import main

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "t.json"
    cache = str(Path(tmp) / "cache")
    main(["analyze", "--level", "113", "--prime", "2", "--export-table", str(path), "--cache-dir", cache])
    print()
    print("table prime/precision:", {k: json.loads(path.read_text())[k] for k in ("prime", "precision")})
    code = main(["import", "--table", str(path)])
    print("exit code", code)
    print()
    main(["synthetic", "--trials", "40", "--seed", "3"])
