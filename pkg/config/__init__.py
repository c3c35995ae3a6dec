from .config import Config