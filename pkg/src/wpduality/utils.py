import logging
import sys
from pathlib import Path
from typing import Optional, Tuple, Union

from .config.settings import settings


def setup_logging(level: Optional[str] = None, log_file: Optional[str] = None):
    """Setup application logging on stderr (and LOG_FILE when set)."""
    handlers = [logging.StreamHandler(sys.stderr)]
    log_file = settings.LOG_FILE if log_file is None else log_file
    if log_file:
        handlers.append(logging.FileHandler(log_file))
    logging.basicConfig(
        level=getattr(logging, (level or ('DEBUG' if settings.DEBUG else settings.LOG_LEVEL)).upper(), logging.WARNING),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=handlers,
        force=True,
    )


def validate_output_path(path: Union[str, Path]) -> Tuple[bool, str]:
    """Check that a report can be written to `path`."""
    path = Path(path)
    if path.exists() and path.is_dir():
        return False, f"{path} is a directory"
    parent = path.parent if str(path.parent) else Path(".")
    if not parent.exists():
        return False, f"Directory {parent} does not exist"
    if not parent.is_dir():
        return False, f"{parent} is not a directory"
    return True, "Path is writable"


def format_duration(seconds: float) -> str:
    """Format a runtime in human-readable form."""
    if seconds < 1.0:
        return f"{seconds * 1000:.0f}ms"
    if seconds < 60.0:
        return f"{seconds:.1f}s"
    minutes, rest = divmod(seconds, 60.0)
    return f"{int(minutes)}m{rest:04.1f}s"
