"""Network reconstruction from path samples with noisy attribute descriptions."""

from ._netrecon import *  # noqa: F401,F403
