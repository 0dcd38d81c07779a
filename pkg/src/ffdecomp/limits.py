"""Size guards for enumeration-based operations.

Anything that walks a full field (or a power of one) checks against
MAX_ORDER first and refuses loudly instead of hanging.  The default is
deliberately desk-scale; override via the environment variable
FFDECOMP_MAX_ORDER or by assigning to MAX_ORDER before calling in.
"""

import os

from .errors import SizeLimitError

ENV_VAR = "FFDECOMP_MAX_ORDER"
DEFAULT_MAX_ORDER = 1 << 26

MAX_ORDER = int(os.environ.get(ENV_VAR, DEFAULT_MAX_ORDER))


def check_enumerable(size: int, what: str) -> None:
    if size > MAX_ORDER:
        raise SizeLimitError(
            f"{what} requires {size} points; configured limit is {MAX_ORDER}"
            f" (override with {ENV_VAR})"
        )
