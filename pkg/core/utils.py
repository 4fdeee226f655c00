"""
Core Utilities
--------------
Reusable helpers shared by the apps and the commands.

Purpose:
- Content hashing for fixtures and cache keys
- Seed parsing
- Run identifiers and output directories
"""
import hashlib
import re
from pathlib import Path

from core.exceptions import PreconditionError

U64_MAX = 2**64 - 1


def sha256_hex(data):
    """
    Hex digest of bytes or text.
    """
    if isinstance(data, str):
        data = data.encode('utf-8')
    return hashlib.sha256(data).hexdigest()


def parse_seed(value):
    """
    Parse a seed given on the command line.

    Args:
        value: int or decimal string

    Returns:
        int: seed in [0, 2**64)
    """
    try:
        seed = int(value)
    except (TypeError, ValueError):
        raise PreconditionError(f"seed must be an unsigned 64-bit integer, got {value!r}")

    if seed < 0 or seed > U64_MAX:
        raise PreconditionError(f"seed out of range: {seed}")

    return seed


def parse_seed_list(value):
    """
    Parse '1,2,3' or '1-5' into a list of seeds.
    """
    seeds = []
    for part in str(value).split(','):
        part = part.strip()
        if not part:
            continue
        match = re.fullmatch(r'(\d+)-(\d+)', part)
        if match:
            low, high = int(match.group(1)), int(match.group(2))
            if high < low:
                raise PreconditionError(f"empty seed range: {part}")
            seeds.extend(parse_seed(s) for s in range(low, high + 1))
        else:
            seeds.append(parse_seed(part))

    if not seeds:
        raise PreconditionError("no seeds given")

    return seeds


def build_run_id(command, fixture, **parts):
    """
    Deterministic run identifier.

    Format: <command>-<fixture stem>[-<key><value>...]
    Example: pvi-mdp_d-n4
    """
    stem = Path(str(fixture)).stem
    suffix = ''.join(f"-{key}{value}" for key, value in parts.items() if value is not None)
    return re.sub(r'[^A-Za-z0-9_.-]', '_', f"{command}-{stem}{suffix}")


def ensure_dir(path):
    """
    Create a directory (and parents) if missing and return it as a Path.
    """
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    return path
