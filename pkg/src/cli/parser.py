import argparse
import os
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

from ..config import Config
from ..utils.error_handler import ConfigError

SUBCOMMANDS = ("decompose", "field", "verify", "scenes")
DEFAULT_BOUNDS = (-2.0, 2.0, -2.0, 2.0)


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    fn: Optional[str] = None
    scene: Optional[str] = None
    n: int = 64
    grid: int = 101
    bounds: Optional[Tuple[float, float, float, float]] = None
    seed: int = Config.SEED
    tol: Optional[float] = None
    samples: int = 10_000
    suite: str = "all"
    out: Optional[str] = None

    def __post_init__(self):
        if self.subcommand not in SUBCOMMANDS:
            raise ConfigError(f"Unknown subcommand {self.subcommand!r}; expected one of {', '.join(SUBCOMMANDS)}")
        if self.grid < 2:
            raise ConfigError(f"--grid must be at least 2 per axis, got {self.grid}")
        if self.subcommand == "decompose":
            if self.fn is None:
                raise ConfigError("decompose needs --fn")
            if self.n < Config.MIN_RESOLUTION:
                raise ConfigError(f"--n must be at least {Config.MIN_RESOLUTION} for decompose, got {self.n}")
        if self.subcommand == "field" and self.scene is None:
            raise ConfigError("field needs --scene")
        if self.bounds is not None:
            x0, x1, y0, y1 = self.bounds
            if not (x0 < x1 and y0 < y1):
                raise ConfigError(f"--bounds must satisfy x0 < x1 and y0 < y1, got {list(self.bounds)}")
        if self.tol is not None and not self.tol > 0:
            raise ConfigError(f"--tol must be positive, got {self.tol}")
        if self.samples < 1:
            raise ConfigError(f"--samples must be positive, got {self.samples}")

    def output_path(self, default_name: str) -> str:
        """--out for single-file outputs, else the default name under the output directory."""
        if self.out is not None:
            return self.out
        return os.path.join(Config.OUTPUT_DIR, default_name)

    def output_dir(self) -> str:
        return self.out if self.out is not None else Config.OUTPUT_DIR


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dcdist", description="DC decompositions of distance functions in the plane")
    sub = parser.add_subparsers(dest="subcommand", parser_class=_Parser)
    sub.required = True

    decompose = sub.add_parser("decompose", help="build a certificate and write its fields on U")
    decompose.add_argument("--fn", required=True, help="builtin function name or JSON function document")
    decompose.add_argument("--n", type=int, default=64, help="interpolation resolution")
    decompose.add_argument("--grid", type=int, default=101, help="grid points per axis")
    decompose.add_argument("--out", help="output directory")

    field = sub.add_parser("field", help="write the distance field of a scene")
    field.add_argument("--scene", required=True, help="gallery name or JSON scene document")
    field.add_argument("--grid", type=int, default=101, help="grid points per axis")
    field.add_argument("--bounds", type=float, nargs=4, metavar=("X0", "X1", "Y0", "Y1"))
    field.add_argument("--out", help="output CSV path")

    verify = sub.add_parser("verify", help="run a verification suite")
    verify.add_argument("--suite", default="all")
    verify.add_argument("--seed", type=int, default=Config.SEED)
    verify.add_argument("--tol", type=float, help="identity tolerance override")
    verify.add_argument("--samples", type=int, default=10_000, help="plane samples per check")
    verify.add_argument("--out", help="output JSON report path")

    scenes = sub.add_parser("scenes", help="list gallery scenes")
    scenes.add_argument("--out", help="also write the listing as JSON")
    return parser


def parse_args(argv: Optional[Sequence[str]] = None) -> RunConfig:
    args = build_parser().parse_args(argv)
    values = {k: v for k, v in vars(args).items() if v is not None}
    if "bounds" in values:
        values["bounds"] = tuple(values["bounds"])
    return RunConfig(**values)
