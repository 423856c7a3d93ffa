from pathlib import Path

CONFIG_DIR = Path("~/.nomuni").expanduser()
__version__ = "0.1.0"
