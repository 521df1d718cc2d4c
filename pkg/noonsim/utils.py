import cmath
import math
import os
from concurrent.futures import ProcessPoolExecutor

import numpy as np
from scipy.special import gammaln
from traitlets import TraitError, TraitType


def log_cosh(x):
    """log(cosh x) for x >= 0, without overflow"""
    return x + math.log1p(math.exp(-2 * x)) - math.log(2)


def log_sinh(x):
    """log(sinh x) for x > 0, without overflow"""
    return x + math.log(-math.expm1(-2 * x)) - math.log(2)


def log_binom(n, k):
    return gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)


def format_number(value):
    """Fixed scientific notation with 12 significant digits"""
    return "{:.11e}".format(float(value))


def parse_complex(value):
    """
    Parse a complex number from the spellings accepted on the command line

    Accepted forms:
      - anything `complex()` understands: "0.785398j", "1+2j", "0.5"
      - "polar:<magnitude>,<phase>" with the phase in radians
    """
    if isinstance(value, (int, float, complex)):
        return complex(value)
    text = str(value).strip().replace(" ", "")
    if text.startswith("polar:"):
        try:
            mag, phase = (float(part) for part in text[len("polar:") :].split(","))
        except ValueError:
            raise ValueError(
                "{!r} is not a valid polar specification, "
                "expected polar:<magnitude>,<phase>".format(value)
            )
        return cmath.rect(mag, phase)
    try:
        return complex(text)
    except ValueError:
        raise ValueError("{!r} is not a valid complex number".format(value))


class ComplexSpecification(TraitType):
    """
    A complex-valued trait that also accepts strings

    Strings are parsed with `parse_complex`, so both "0.785398j" and
    "polar:0.3,0.7" are valid.
    """

    default_value = 0j
    info_text = "a complex number, or a string such as '0.785j' or 'polar:0.3,0.7'"

    def validate(self, obj, value):
        try:
            return parse_complex(value)
        except (TypeError, ValueError):
            raise TraitError(
                "{val} is not a valid complex specification. "
                "Must be a number or a string like '0.785j' or "
                "'polar:0.3,0.7'".format(val=value)
            )


def validate_grid(start, stop, step):
    """
    Ascending grid start, start + step, ... up to and including stop

    Raises ValueError on an empty, descending or non-finite grid. The end point
    is kept when it lies within a small fraction of a step of the grid.
    """
    if not all(math.isfinite(v) for v in (start, stop, step)):
        raise ValueError("Grid bounds and step must be finite")
    if start < 0:
        raise ValueError("Grid start must be nonnegative, got {}".format(start))
    if stop < start:
        raise ValueError(
            "Grid stop {} lies below grid start {}".format(stop, start)
        )
    if step <= 0:
        raise ValueError("Grid step must be positive, got {}".format(step))
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    # multiplying avoids the drift of repeated addition
    return start + step * np.arange(count)


def check_output_path(path, directory=False):
    """
    Fail early if `path` cannot be written

    For a directory the directory is created if needed. For a file its parent
    directory must already exist.
    """
    if not path:
        raise ValueError("An output path is required")
    path = os.path.abspath(path)
    if directory:
        if os.path.exists(path) and not os.path.isdir(path):
            raise ValueError("{} exists and is not a directory".format(path))
        os.makedirs(path, exist_ok=True)
        target = path
    else:
        if os.path.isdir(path):
            raise ValueError("{} is a directory, expected a file".format(path))
        target = os.path.dirname(path)
        if not os.path.isdir(target):
            raise ValueError("Directory {} does not exist".format(target))
    if not os.access(target, os.W_OK):
        raise ValueError("{} is not writable".format(target))
    return path


def parallel_map(fn, items, jobs=1):
    """
    map(fn, items) as a list, in order

    With jobs > 1 the items are spread over a process pool; `fn` must then be
    picklable (a module level function or a functools.partial of one).
    """
    items = list(items)
    if jobs is None or jobs <= 1 or len(items) < 2:
        return [fn(item) for item in items]
    chunksize = max(1, len(items) // (4 * jobs))
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items, chunksize=chunksize))
