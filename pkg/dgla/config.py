import os
import copy
from dataclasses import dataclass, field

import toml

DEFAULT_MAX_WEIGHT = 4
DEFAULT_DEPTH = 3
DEFAULT_DEGREE_WINDOW = "-6:6"
DEFAULT_SEED = 0
DEFAULT_THREADS = 1

DEFAULT_LOG_FILE = "/tmp/dgla.log"
DEFAULT_LOG_LEVEL = "INFO"

DEFAULT_FORMAT = "json"
DEFAULT_TABLE_STYLE = "simple"

# Extra polynomial weight kept above the nilpotency order when truncating
# semi-free algebras in the cellular tower.
DEFAULT_WEIGHT_MARGIN = 2

FORMATS = ["json", "csv", "table"]
LOG_LEVELS = ["DEBUG", "INFO", "WARNING", "ERROR"]

DEFAULT_TR = {
    "verdict_pass": "PASS",
    "verdict_fail": "FAIL",
    "col_degree": "Degree",
    "col_weight": "Weight",
    "col_dim": "Dim",
}


@dataclass
class Config:
    max_weight: int = DEFAULT_MAX_WEIGHT
    depth: int = DEFAULT_DEPTH
    degree_window: str = DEFAULT_DEGREE_WINDOW
    seed: int = DEFAULT_SEED
    threads: int = DEFAULT_THREADS
    weight_margin: int = DEFAULT_WEIGHT_MARGIN
    log_file: str = DEFAULT_LOG_FILE
    log_level: str = DEFAULT_LOG_LEVEL
    output_format: str = DEFAULT_FORMAT
    table_style: str = DEFAULT_TABLE_STYLE
    tr: dict = field(default_factory=lambda: copy.deepcopy(DEFAULT_TR))

    def set_by_path(self, path: str, value):
        parts = path.split(".")

        if parts[0] == "defaults":
            if len(parts) != 2:
                raise ValueError(f"Invalid config path: '{path}'")
            if parts[1] in ["max_weight", "depth", "seed", "weight_margin"]:
                setattr(self, parts[1], int(value))
                return
            if parts[1] == "degree_window":
                parse_window(value)
                self.degree_window = value
                return
            raise ValueError(
                f"Invalid config path: '{path}'. Invalid defaults key '{parts[1]}'"
            )

        if path == "threads":
            n = int(value)
            if n < 1:
                raise ValueError(f"threads must be positive, got {n}")
            self.threads = n
            return

        if parts[0] == "log":
            if len(parts) != 2:
                raise ValueError(f"Invalid config path: '{path}'")
            if parts[1] == "file":
                self.log_file = value
                return
            if parts[1] == "level":
                if value.upper() not in LOG_LEVELS:
                    raise ValueError(
                        f"Invalid config path: '{path}'. Invalid log level '{value}'"
                    )
                self.log_level = value.upper()
                return
            raise ValueError(f"Invalid config path: '{path}'")

        if parts[0] == "output":
            if len(parts) != 2:
                raise ValueError(f"Invalid config path: '{path}'")
            if parts[1] == "format":
                if value not in FORMATS:
                    raise ValueError(
                        f"Invalid config path: '{path}'. Invalid output format '{value}'"
                    )
                self.output_format = value
                return
            if parts[1] == "table_style":
                self.table_style = value
                return
            raise ValueError(
                f"Invalid config path: '{path}'. Invalid output key '{parts[1]}'"
            )

        if parts[0] == "tr":
            if len(parts) != 2:
                raise ValueError(f"Invalid config path: '{path}'")
            if parts[1] not in self.tr:
                raise ValueError(
                    f"Invalid config path: '{path}'. Invalid translation key '{parts[1]}'"
                )
            self.tr[parts[1]] = value
            return

        raise ValueError(f"Invalid config path: '{path}'")

    def window(self):
        return parse_window(self.degree_window)


def parse_window(text: str):
    """
    "a:b" -> (a, b) with a <= b, both inclusive.
    """
    try:
        lo, hi = text.split(":")
        lo, hi = int(lo), int(hi)
    except ValueError:
        raise ValueError(f"Invalid degree window '{text}', expected 'a:b'")
    if lo > hi:
        raise ValueError(f"Invalid degree window '{text}', {lo} > {hi}")
    return lo, hi


def read_config(path: str) -> Config:
    c = Config()
    if path is None or not os.path.exists(path):
        return c

    filename = path
    if os.path.isdir(path):
        filename = os.path.join(path, "dgla.toml")
        if not os.path.exists(filename):
            return c

    with open(filename) as f:
        cfg = toml.load(f)

    for k in cfg:
        if k not in ["defaults", "log", "output", "tr", "threads"]:
            raise ValueError(f"Unsupported config section: {k}")

    if "defaults" in cfg:
        defaults = cfg["defaults"]
        c.max_weight = defaults.get("max_weight", DEFAULT_MAX_WEIGHT)
        c.depth = defaults.get("depth", DEFAULT_DEPTH)
        c.degree_window = defaults.get("degree_window", DEFAULT_DEGREE_WINDOW)
        c.seed = defaults.get("seed", DEFAULT_SEED)
        c.weight_margin = defaults.get("weight_margin", DEFAULT_WEIGHT_MARGIN)
        parse_window(c.degree_window)

    if "log" in cfg:
        log = cfg["log"]
        c.log_file = log.get("file", DEFAULT_LOG_FILE)
        c.log_level = log.get("level", DEFAULT_LOG_LEVEL).upper()

    if "output" in cfg:
        output = cfg["output"]
        c.output_format = output.get("format", DEFAULT_FORMAT)
        c.table_style = output.get("table_style", DEFAULT_TABLE_STYLE)
        if c.output_format not in FORMATS:
            raise ValueError(f"Unsupported output format: {c.output_format}")

    if "tr" in cfg:
        for k, v in cfg["tr"].items():
            if k not in DEFAULT_TR.keys():
                raise ValueError(f"Unsupported translation: {k}")
            c.tr[k] = v

    c.threads = cfg.get("threads", DEFAULT_THREADS)

    return c


DEFAULT_CONFIG = Config()

C = Config()


def load_config(path: str):
    c = read_config(path)
    for k, _ in C.__annotations__.items():
        setattr(C, k, getattr(c, k))
    env_threads = os.environ.get("DGLA_THREADS")
    if env_threads:
        C.set_by_path("threads", env_threads)


def _config_toml(c: Config) -> str:
    out = dict(
        defaults=dict(
            max_weight=c.max_weight,
            depth=c.depth,
            degree_window=c.degree_window,
            seed=c.seed,
            weight_margin=c.weight_margin,
        ),
        log=dict(
            file=c.log_file,
            level=c.log_level,
        ),
        output=dict(
            format=c.output_format,
            table_style=c.table_style,
        ),
        tr=c.tr,
        threads=c.threads,
    )
    return toml.dumps(out)


def default_config_toml() -> str:
    return _config_toml(DEFAULT_CONFIG)


def config_toml():
    return _config_toml(C)


if __name__ == "__main__":
    print(default_config_toml())
