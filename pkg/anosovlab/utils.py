from pathlib import Path
import os
import re
import sys
import copy
import json
import inspect
import importlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence, Tuple

from deepmerge import always_merger
from dotenv import load_dotenv

from anosovlab import settings
from anosovlab.errors import InvalidInputError
from anosovlab.linalg import Hyperbolic2, IntMat

_MATRIX_RE = re.compile(r"^\s*([+-]?\d+)\s*,\s*([+-]?\d+)\s*;\s*([+-]?\d+)\s*,\s*([+-]?\d+)\s*$")

_ORBIT_ID_RE = re.compile(r"^p(\d+)-i(\d+)$")

_MOVE_RE = re.compile(r"^\s*\(?\s*(p\d+-i\d+)\s*,\s*([+-]?\d+)\s*\)?\s*$")


def get_user_config() -> dict:
    """
    Retrieve the user configuration settings.

    Loads the configuration from the JSON file specified by `settings.CONFIG_PATH`.
    If the configuration file does not exist, it creates an empty JSON file at that location.

    Returns:
        dict: The stored settings, empty when the file was just created.

    Example:
        >>> get_user_config()
        {'max_period': 4}
    """

    config = {}

    if settings.CONFIG_PATH.is_file():
        try:
            config.update(json.loads(settings.CONFIG_PATH.read_text()))
        except json.JSONDecodeError as exc:
            raise InvalidInputError(f"{settings.CONFIG_PATH} is not valid JSON: {exc}") from exc
    else:
        settings.CONFIG_PATH.parent.mkdir(parents=True, exist_ok=True)
        settings.CONFIG_PATH.write_text("{}")

    return config


def save_user_config(config: dict):
    settings.CONFIG_PATH.parent.mkdir(parents=True, exist_ok=True)
    settings.CONFIG_PATH.write_text(json.dumps(config, indent=2, ensure_ascii=False))


def coerce_config_value(key: str, value):
    """
    Convert a raw configuration value to the type of its built-in default.

    Args:
        key (str): A key of `settings.DEFAULTS`.
        value: The raw value, usually a string from the command line or the config file.

    Returns:
        The value as an int or a str, matching the default.

    Raises:
        InvalidInputError: If the key is unknown or the value does not convert.

    Example:
        >>> coerce_config_value("max_period", "5")
        5
    """

    if key not in settings.DEFAULTS:
        known = ", ".join(sorted(settings.DEFAULTS))
        raise InvalidInputError(f"unknown configuration key '{key}' (known keys: {known})")

    default = settings.DEFAULTS[key]
    if isinstance(default, int):
        try:
            return int(value)
        except (TypeError, ValueError):
            raise InvalidInputError(f"configuration key '{key}' needs an integer, got {value!r}")
    if key == "format" and value not in settings.OUTPUT_FORMATS:
        raise InvalidInputError(f"format must be one of {', '.join(settings.OUTPUT_FORMATS)}")
    if key in ("c0", "kappa3", "tau"):
        parse_rational(value, key)
    return str(value)


def parse_config_items(items: Iterable[str]) -> dict:
    """Parse ``key=value`` strings into a coerced dictionary."""
    parsed = {}
    for item in items:
        if "=" not in item:
            raise InvalidInputError(f"expected key=value, got {item!r}")
        key, value = item.split("=", 1)
        key = key.strip().replace("-", "_")
        parsed[key] = coerce_config_value(key, value.strip())
    return parsed


def parse_rational(value, name: str = "value") -> Fraction:
    try:
        result = Fraction(str(value))
    except (ValueError, ZeroDivisionError):
        raise InvalidInputError(f"{name} must be a rational number such as 3/2, got {value!r}")
    return result


def parse_matrix(text: str) -> Hyperbolic2:
    """
    Parse a matrix written as ``"a,b;c,d"`` and check that it is hyperbolic.

    Args:
        text (str): Four integers, rows separated by ``;``; spaces are allowed.

    Returns:
        Hyperbolic2: The parsed matrix.

    Raises:
        InvalidInputError: If the text is not a 2x2 integer matrix.
        NotHyperbolicError: If the matrix is not hyperbolic.

    Example:
        >>> str(parse_matrix("2, 1; 1, 1"))
        '2,1;1,1'
    """

    match = _MATRIX_RE.match(text or "")
    if not match:
        raise InvalidInputError(f"malformed matrix {text!r}: expected 'a,b;c,d' with integer entries")
    a, b, c, d = (int(x) for x in match.groups())
    return Hyperbolic2(IntMat(2, 2, (a, b, c, d)))


def parse_orbit_id(text: str) -> Tuple[int, int]:
    """Split an orbit id ``pK-iJ`` into ``(K, J)``."""
    match = _ORBIT_ID_RE.match(text.strip())
    if not match:
        raise InvalidInputError(f"malformed orbit id {text!r}: expected pK-iJ, e.g. p1-i0")
    period, index = (int(x) for x in match.groups())
    if period < 1:
        raise InvalidInputError(f"malformed orbit id {text!r}: period must be at least 1")
    return period, index


def parse_move(text: str) -> Tuple[str, int]:
    """
    Parse a surgery move ``"pK-iJ,m"``; surrounding parentheses are optional.

    Example:
        >>> parse_move("(p2-i1, -3)")
        ('p2-i1', -3)
    """

    match = _MOVE_RE.match(text or "")
    if not match:
        raise InvalidInputError(f"malformed move {text!r}: expected 'pK-iJ,m'")
    orbit_id, slope = match.groups()
    parse_orbit_id(orbit_id)
    return orbit_id, int(slope)


@dataclass(frozen=True)
class RunConfig:
    """Resolved settings of one command invocation.

    Attributes:
        matrix (str): The matrix string as given.
        subcommand (str): Name of the command being run.
        max_period (int): Orbit period bound P.
        max_slope (int): Slope bound M.
        brute_height (int): Entry bound H of the brute-force conjugator search.
        m0 (int): User-asserted slope threshold for "certified" labels.
        format (str): One of json, tsv, dot.
        threads (int): Worker threads for sweeps.
        c0 (Fraction): Free-homotopy bound constant.
        t0 (int): Horizon below which the bound is not asserted.
        kappa3 (Fraction): Period comparison constant.
        tau (Fraction): Duration of one fiber crossing.
    """

    matrix: str
    subcommand: str
    max_period: int
    max_slope: int
    brute_height: int
    m0: int
    format: str
    threads: int
    c0: Fraction
    t0: int
    kappa3: Fraction
    tau: Fraction

    def __post_init__(self):
        if self.max_period < 1:
            raise InvalidInputError(f"max-period must be >= 1, got {self.max_period}")
        if self.max_slope < 0:
            raise InvalidInputError(f"max-slope must be >= 0, got {self.max_slope}")
        if self.brute_height < 1:
            raise InvalidInputError(f"brute-height must be >= 1, got {self.brute_height}")
        if self.m0 < 1:
            raise InvalidInputError(f"m0 must be >= 1, got {self.m0}")
        if self.threads < 1:
            raise InvalidInputError(f"threads must be >= 1, got {self.threads}")
        if self.format not in settings.OUTPUT_FORMATS:
            raise InvalidInputError(f"format must be one of {', '.join(settings.OUTPUT_FORMATS)}")
        for name in ("c0", "kappa3", "tau"):
            if getattr(self, name) <= 0:
                raise InvalidInputError(f"{name} must be positive, got {getattr(self, name)}")
        if self.t0 < 1:
            raise InvalidInputError(f"t0 must be a positive integer, got {self.t0}")

    @property
    def bounds(self) -> dict:
        return {
            "max_period": self.max_period,
            "max_slope": self.max_slope,
            "brute_height": self.brute_height,
            "m0": self.m0,
            "c0": str(self.c0),
            "t0": self.t0,
            "kappa3": str(self.kappa3),
            "tau": str(self.tau),
        }


def environment_layer() -> dict:
    """Settings taken from the process environment, after loading ``./.env``."""
    load_dotenv(Path.cwd() / ".env")
    layer = {}
    threads = os.environ.get(settings.THREADS_ENV)
    if threads:
        try:
            layer["threads"] = int(threads)
        except ValueError:
            raise InvalidInputError(f"{settings.THREADS_ENV} must be an integer, got {threads!r}")
    return layer


def build_run_config(matrix: str, subcommand: str, **options) -> RunConfig:
    """
    Combine built-in defaults, the user config file, the environment and the
    command-line options, later layers winning.

    Args:
        matrix (str): The ``--matrix`` string.
        subcommand (str): The command name.
        **options: Command-line values; ``None`` means "not given".

    Returns:
        RunConfig: The validated configuration.

    Example:
        >>> build_run_config("2,1;1,1", "orbits", max_period=5).max_period
        5
    """

    user_layer = {key: coerce_config_value(key, value) for key, value in get_user_config().items()}
    cli_layer = {
        key: coerce_config_value(key, value) for key, value in options.items() if value is not None
    }

    merged = copy.deepcopy(settings.DEFAULTS)
    for layer in (user_layer, environment_layer(), cli_layer):
        merged = always_merger.merge(merged, layer)

    threads = merged["threads"] or os.cpu_count() or 1
    return RunConfig(
        matrix=matrix,
        subcommand=subcommand,
        max_period=merged["max_period"],
        max_slope=merged["max_slope"],
        brute_height=merged["brute_height"],
        m0=merged["m0"],
        format=merged["format"],
        threads=threads,
        c0=parse_rational(merged["c0"], "c0"),
        t0=merged["t0"],
        kappa3=parse_rational(merged["kappa3"], "kappa3"),
        tau=parse_rational(merged["tau"], "tau"),
    )


def parallel_map(func: Callable, items: Sequence, threads: Optional[int] = None) -> list:
    """
    Map ``func`` over ``items`` on a thread pool, keeping input order.

    Args:
        func (Callable): A pure function of one argument.
        items (Sequence): The inputs.
        threads (Optional[int]): Pool size; ``None`` or 1 runs in the calling thread.

    Returns:
        list: ``[func(item) for item in items]``.
    """

    items = list(items)
    if not threads or threads <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=min(threads, len(items))) as pool:
        return list(pool.map(func, items))


def load_priv_funcs_from_mod(module_path: Path) -> Iterable[Tuple[str, Callable]]:
    """
    Import a module by file path and return its members.

    Modifies `sys.path` if necessary for import.

    Args:
        module_path (Path): The path to the Python module file.

    Returns:
        Iterable of (str, Callable) tuples for every member of the module.
    """

    if str(module_path.parent) not in sys.path:
        sys.path.append(str(module_path.parent))

    module = importlib.import_module(module_path.stem)

    return inspect.getmembers(module, inspect.isfunction)


def load_jinja_filters(module_path: Path) -> Iterable[Tuple[str, Callable]]:
    """
    Load Jinja2 filter functions (names starting with ``filter_``) from a module.

    Example:
        >>> dict(load_jinja_filters(settings.TEMPLATE_DIR / "handlers.py"))["filter_tsv_cell"]("a\\tb")
        'a b'
    """

    members = load_priv_funcs_from_mod(module_path)
    return (mem for mem in members if mem[0].startswith("filter_"))


def load_jinja_globals(module_path: Path) -> Iterable[Tuple[str, Callable]]:
    """Load Jinja2 global functions (names starting with ``global_``) from a module."""

    members = load_priv_funcs_from_mod(module_path)
    return (mem for mem in members if mem[0].startswith("global_"))
