import os
import tempfile
from pathlib import Path

# Color tables are canonical (bit-for-bit reproducible), so a shared on-disk
# cache only trades rebuild time; keep it under the system temp dir.
os.environ.setdefault(
    "DELCODE_TABLE_DIR",
    str(Path(tempfile.gettempdir()) / "delcode-test-tables"),
)
