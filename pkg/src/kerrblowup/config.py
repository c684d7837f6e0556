"""Run configuration: TOML ingestion, validation and sweep-axis substitution.

Complex numbers are written as ``[re, im]`` pairs (a bare real number is also
accepted).  A profile is either such a constant or a table with a ``kind`` key,
see :meth:`kerrblowup.slab.ProfileSpec.from_dict`.  Example::

    [physical]
    k = 1.0
    theta = 0.0
    L = 2.0
    eps_l = [1.0, 0.0]
    sigma = [-1.0, 0.0]

    [ic]
    c0 = [2.0, 0.0]
    c1 = [2.0, 0.0]
"""

from __future__ import annotations

import cmath
import copy
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .analytic import SecSolutionParams
from .errors import ConfigError, KerrBlowupError
from .glassey import GlasseyData
from .integrator import InitialConditions, IntegratorConfig
from .slab import PhysicalParams, ProfileSpec, SlabProfile, as_complex, nondimensionalize

MODES = ("simulate", "sweep", "verify-bound", "analytic", "check")
SECTIONS = {"mode", "physical", "nondimensional", "ic", "integrator", "sweep",
            "output", "analytic", "glassey", "verify"}
SWEEP_AXES = ("k", "theta", "L", "z_max", "r.re", "r.im", "s.re", "s.im", "c0.abs", "phase_diff")
MAX_SWEEP_POINTS = 1_000_000


@dataclass(frozen=True)
class SweepAxis:
    name: str
    start: float
    stop: float
    count: int
    spacing: str = "linear"

    def values(self) -> list[float]:
        import numpy as np

        if self.spacing == "log":
            return [float(v) for v in np.geomspace(self.start, self.stop, self.count)]
        return [float(v) for v in np.linspace(self.start, self.stop, self.count)]


@dataclass
class RunConfig:
    raw: dict
    mode: str | None = None
    profile: SlabProfile | None = None
    physical: PhysicalParams | None = None
    ic: InitialConditions | None = None
    integrator: IntegratorConfig = field(default_factory=IntegratorConfig)
    axes: list[SweepAxis] = field(default_factory=list)
    workers: int = 1
    analytic: SecSolutionParams | None = None
    analytic_fraction: float = 0.99
    analytic_points: int = 101
    glassey: GlasseyData | None = None
    verify_simulate: bool = True
    output: dict = field(default_factory=dict)

    @property
    def timing(self) -> bool:
        return bool(self.output.get("timing", True))


def _get(block: dict, key: str, where: str, conv=float, default=...):
    if key not in block:
        if default is ...:
            raise ConfigError(f"field '{where}.{key}': missing")
        return default
    try:
        return conv(block[key])
    except (TypeError, ValueError, KerrBlowupError) as exc:
        raise ConfigError(f"field '{where}.{key}': {exc}") from None


def _profile(block: dict, key: str, where: str) -> ProfileSpec:
    if key not in block:
        raise ConfigError(f"field '{where}.{key}': missing")
    try:
        return ProfileSpec.from_dict(block[key])
    except (TypeError, ValueError, KerrBlowupError) as exc:
        raise ConfigError(f"field '{where}.{key}': {exc}") from None


def _table(raw: dict, name: str) -> dict:
    block = raw.get(name, {})
    if not isinstance(block, dict):
        raise ConfigError(f"field '{name}': expected a table")
    return block


def parse_config(raw: dict) -> RunConfig:
    """Validate a configuration mapping and build the typed run description."""
    if not isinstance(raw, dict):
        raise ConfigError("configuration must be a table")
    unknown = set(raw) - SECTIONS
    if unknown:
        raise ConfigError(f"unknown top-level field(s): {', '.join(sorted(unknown))}")
    raw = copy.deepcopy(raw)
    cfg = RunConfig(raw=raw)

    mode = raw.get("mode")
    if mode is not None and mode not in MODES:
        raise ConfigError(f"field 'mode': expected one of {MODES}, got {mode!r}")
    cfg.mode = mode

    has_phys, has_nd = "physical" in raw, "nondimensional" in raw
    if has_phys and has_nd:
        raise ConfigError("fields 'physical' and 'nondimensional' are mutually exclusive")
    try:
        if has_phys:
            blk = _table(raw, "physical")
            cfg.physical = PhysicalParams(
                k=_get(blk, "k", "physical"),
                theta=_get(blk, "theta", "physical", default=0.0),
                L=_get(blk, "L", "physical"),
                eps_l=_profile(blk, "eps_l", "physical"),
                sigma=_profile(blk, "sigma", "physical"),
            )
            cfg.profile = nondimensionalize(cfg.physical)
        elif has_nd:
            blk = _table(raw, "nondimensional")
            cfg.profile = SlabProfile(
                _profile(blk, "r", "nondimensional"),
                _profile(blk, "s", "nondimensional"),
                _get(blk, "z_max", "nondimensional"),
            )
    except ConfigError:
        raise
    except KerrBlowupError as exc:
        section = "physical" if has_phys else "nondimensional"
        raise ConfigError(f"field '{section}': {exc}") from None

    if "ic" in raw:
        blk = _table(raw, "ic")
        cfg.ic = InitialConditions(_get(blk, "c0", "ic", as_complex), _get(blk, "c1", "ic", as_complex))

    blk = _table(raw, "integrator")
    known = {"rel_tol", "abs_tol", "max_step", "blowup_threshold", "min_step", "max_steps"}
    if set(blk) - known:
        raise ConfigError(f"field 'integrator': unknown key(s) {sorted(set(blk) - known)}")
    cfg.integrator = IntegratorConfig(
        **{key: (int(v) if key == "max_steps" else float(v)) for key, v in blk.items()}
    )

    blk = _table(raw, "sweep")
    cfg.workers = _get(blk, "workers", "sweep", int, default=1)
    for i, ax in enumerate(blk.get("axes", [])):
        where = f"sweep.axes[{i}]"
        name = _get(ax, "name", where, str)
        if name not in SWEEP_AXES:
            raise ConfigError(f"field '{where}.name': {name!r} is not a sweepable parameter {SWEEP_AXES}")
        spacing = _get(ax, "spacing", where, str, default="linear")
        if spacing not in ("linear", "log"):
            raise ConfigError(f"field '{where}.spacing': expected 'linear' or 'log'")
        axis = SweepAxis(name, _get(ax, "start", where), _get(ax, "stop", where),
                         _get(ax, "count", where, int), spacing)
        if axis.count < 1:
            raise ConfigError(f"field '{where}.count': must be >= 1")
        if spacing == "log" and not (axis.start > 0 and axis.stop > 0):
            raise ConfigError(f"field '{where}': log spacing needs positive bounds")
        cfg.axes.append(axis)
    if len(cfg.axes) > 2:
        raise ConfigError("field 'sweep.axes': at most two axes are supported")
    if math.prod(a.count for a in cfg.axes) > MAX_SWEEP_POINTS:
        raise ConfigError(f"field 'sweep.axes': more than {MAX_SWEEP_POINTS} grid points")
    for axis in cfg.axes:
        # surface bad axis/target combinations before any work is done
        apply_axis(raw, axis.name, axis.start)

    if "analytic" in raw:
        blk = _table(raw, "analytic")
        try:
            cfg.analytic = SecSolutionParams(
                eps_l=_get(blk, "eps_l", "analytic"),
                theta=_get(blk, "theta", "analytic", default=0.0),
                sigma=_get(blk, "sigma", "analytic"),
                k=_get(blk, "k", "analytic", default=1.0),
                phase=_get(blk, "phase", "analytic", default=0.0),
            )
        except ConfigError:
            raise
        except KerrBlowupError as exc:
            raise ConfigError(f"field 'analytic': {exc}") from None
        cfg.analytic_fraction = _get(blk, "fraction", "analytic", default=0.99)
        cfg.analytic_points = _get(blk, "points", "analytic", int, default=101)
        if not 0 < cfg.analytic_fraction < 1 or cfg.analytic_points < 2:
            raise ConfigError("field 'analytic': need 0 < fraction < 1 and points >= 2")

    if "glassey" in raw:
        blk = _table(raw, "glassey")
        cfg.glassey = GlasseyData(*(_get(blk, key, "glassey") for key in ("alpha", "beta", "a", "b")))

    cfg.verify_simulate = bool(_table(raw, "verify").get("simulate", True))
    cfg.output = dict(_table(raw, "output"))
    return cfg


def load_config(path) -> RunConfig:
    text = Path(path).read_text()
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from None
    return parse_config(raw)


def apply_axis(raw: dict, name: str, value: float) -> dict:
    """Copy of ``raw`` with the sweep parameter ``name`` set to ``value``."""
    out = copy.deepcopy(raw)
    phys = out.get("physical")
    nd = out.get("nondimensional")
    if name in ("k", "theta", "L"):
        if phys is None:
            raise ConfigError(f"sweep axis {name!r} needs a 'physical' block")
        phys[name] = value
    elif name == "z_max":
        if nd is None:
            raise ConfigError("sweep axis 'z_max' needs a 'nondimensional' block")
        nd["z_max"] = value
    elif name[:2] in ("r.", "s."):
        block = phys if phys is not None else nd
        if block is None:
            raise ConfigError(f"sweep axis {name!r} needs a slab block")
        key = {"r": "eps_l", "s": "sigma"}[name[0]] if phys is not None else name[0]
        current = block.get(key)
        if isinstance(current, dict):
            if current.get("kind", "constant") != "constant":
                raise ConfigError(f"sweep axis {name!r} needs a constant profile")
            current = current.get("value")
        try:
            c = as_complex(current)
        except (TypeError, ValueError, KerrBlowupError):
            raise ConfigError(f"sweep axis {name!r}: profile {key!r} is not a constant") from None
        c = complex(value, c.imag) if name.endswith(".re") else complex(c.real, value)
        block[key] = [c.real, c.imag]
    elif name in ("c0.abs", "phase_diff"):
        ic = out.get("ic")
        if ic is None:
            raise ConfigError(f"sweep axis {name!r} needs an 'ic' block")
        c0, c1 = as_complex(ic["c0"]), as_complex(ic["c1"])
        if name == "c0.abs":
            c0 = cmath.rect(value, cmath.phase(c0))
        else:
            c1 = cmath.rect(abs(c1), cmath.phase(c0) + value)
        ic["c0"], ic["c1"] = [c0.real, c0.imag], [c1.real, c1.imag]
    else:
        raise ConfigError(f"unknown sweep axis {name!r}")
    return out
