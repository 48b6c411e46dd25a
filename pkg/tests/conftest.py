import sys
from pathlib import Path

# library modules live side by side in scripts/ and import each other by name
sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "scripts"))
