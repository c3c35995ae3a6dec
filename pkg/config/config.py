import os
from pathlib import Path
from dotenv import load_dotenv

# --- dotenv loading ---
ENV = os.getenv("ENV", "local")
DOTENV_PATH = os.getenv("DOTENV_PATH")
if ENV == "local":
    load_dotenv()  # local only
elif DOTENV_PATH:
    # ci/cluster: mounted .env; pre-set variables win
    load_dotenv(dotenv_path=DOTENV_PATH, override=False)

# Base dir for resolving relative paths
BASE_DIR = Path(__file__).resolve().parent.parent


def _resolve(path_str: str) -> Path:
    p = Path(path_str.strip("'\""))
    return p if p.is_absolute() else (BASE_DIR / p)


def _optional_int(name: str):
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return None
    return int(raw)


class Config:
    """Configuration class for the simulator and its tooling."""

    # Reproducibility
    SEED = _optional_int('COTEX_SEED')

    # Logging
    LOG_LEVEL = os.getenv('COTEX_LOG_LEVEL', 'INFO').upper()
    LOG_DIR = _resolve(os.getenv('COTEX_LOG_DIR', 'logs'))

    # Outputs (traces, sweep CSVs)
    OUTPUT_DIR = _resolve(os.getenv('COTEX_OUTPUT_DIR', 'output'))

    # Engine
    ROUND_LIMIT_FACTOR = int(os.getenv('COTEX_ROUND_LIMIT_FACTOR', '10'))
    CHECK_EVERY_ROUND_MAX_N = int(os.getenv('COTEX_CHECK_EVERY_ROUND_MAX_N', '2000'))

    # Guards
    BRUTEFORCE_MAX = int(os.getenv('COTEX_BRUTEFORCE_MAX', '6'))
    MAX_TREE_NODES = int(os.getenv('COTEX_MAX_TREE_NODES', str(10 ** 7)))

    # Sweeps
    SWEEP_WORKERS = int(os.getenv('COTEX_SWEEP_WORKERS', '1'))

    @classmethod
    def seed_or(cls, seed):
        """Env seed override, used for fuzzing seeded components."""
        return cls.SEED if cls.SEED is not None else seed
