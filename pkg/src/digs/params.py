"""Model parameters, presets, validation and config-file I/O.

Every rate, Rabi frequency and detuning is dimensionless, measured in units
of the probe coherence decay rate gamma_ab.  Levels are labelled
``a, b, bp, c, cp`` (``bp`` is b', ``cp`` is c').
"""
from __future__ import annotations

import configparser
import dataclasses
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Union

from .errors import ConfigError, UnknownPresetError

LEVELS = ("a", "b", "bp", "c", "cp")
INDEX = {name: i for i, name in enumerate(LEVELS)}
GROUND_LEVELS = ("b", "bp", "c", "cp")

# unordered level pairs in basis order; field names are gamma_ph_<j><k>
PAIRS = tuple((LEVELS[j], LEVELS[k]) for j in range(5) for k in range(j + 1, 5))


def dephasing_field(j: str, k: str) -> str:
    """Name of the dephasing field for the unordered pair (j, k)."""
    if INDEX[j] > INDEX[k]:
        j, k = k, j
    return f"gamma_ph_{j}{k}"


@dataclass(frozen=True)
class OpenPump:
    """Incoherent pumping into |b> and |c'> from outside the five levels."""

    r_b: float = 0.0
    r_cp: float = 0.0

    variant = "open"


@dataclass(frozen=True)
class ClosedPump:
    """Pumping |b> -> |a> at rate r with |a> decaying back inside the system.

    The branching ratios alpha_b, alpha_c, alpha_cp give the fraction of
    spontaneous decay from |a> into |b>, |c> and |c'>.
    """

    r: float = 0.0
    alpha_b: float = 1.0 / 3.0
    alpha_c: float = 1.0 / 3.0
    alpha_cp: float = 1.0 / 3.0

    variant = "closed"


PumpConfig = Union[OpenPump, ClosedPump]


@dataclass(frozen=True)
class SystemParams:
    """Complete parameter set of the five-level system.

    ``p_b`` and ``rho_cpcp`` optionally fix the generalized b-manifold
    population and the |c'> population used by the closed-form methods.
    When left as None those are derived from the pump; the numeric solver
    ignores them.
    """

    omega_mu: float = 2.0
    omega_b: float = 0.1
    omega_c: float = 0.1
    omega_p: float = 1e-4
    delta_p: float = 0.0
    delta_mu: float = 0.0
    delta_b: float = 0.0
    delta_c: float = 0.0
    gamma_a: float = 2.0
    gamma_b: float = 0.0
    gamma_bp: float = 0.0
    gamma_c: float = 0.0
    gamma_cp: float = 0.0
    gamma_ph_ab: float = 0.0
    gamma_ph_abp: float = 0.0
    gamma_ph_ac: float = 0.0
    gamma_ph_acp: float = 0.0
    gamma_ph_bbp: float = 0.0
    gamma_ph_bc: float = 0.0
    gamma_ph_bcp: float = 0.0
    gamma_ph_bpc: float = 0.0
    gamma_ph_bpcp: float = 0.0
    gamma_ph_ccp: float = 0.0
    pump: PumpConfig = field(default_factory=ClosedPump)
    pump_broadening: bool = False
    p_b: complex | None = None
    rho_cpcp: float | None = None

    # ---- derived rates -------------------------------------------------
    def decay(self, j: str) -> float:
        """Population decay rate gamma_j of level j."""
        return getattr(self, f"gamma_{j}")

    def dephasing(self, j: str, k: str) -> float:
        return getattr(self, dephasing_field(j, k))

    def relaxation(self, j: str, k: str) -> float:
        """Coherence decay gamma_jk = (gamma_j + gamma_k)/2 + gamma_jk^ph.

        With ``pump_broadening`` set in the closed configuration, each of a
        and b additionally contributes r/2.
        """
        if j == k:
            raise ValueError("relaxation is defined for coherences only")
        rate = 0.5 * (self.decay(j) + self.decay(k)) + self.dephasing(j, k)
        if self.pump_broadening and isinstance(self.pump, ClosedPump):
            rate += 0.5 * self.pump.r * ((j in ("a", "b")) + (k in ("a", "b")))
        return rate

    @property
    def gamma_ab(self) -> float:
        return self.relaxation("a", "b")

    @property
    def gamma_C(self) -> float:
        """Decay of the c-b coherence."""
        return self.relaxation("c", "b")

    @property
    def gamma_Cp(self) -> float:
        """Decay of the c'-b coherence."""
        return self.relaxation("cp", "b")

    @property
    def is_closed(self) -> bool:
        return isinstance(self.pump, ClosedPump)

    def replace(self, **changes) -> "SystemParams":
        """Copy with fields changed; pump fields (r, r_b, alpha_c, ...) are routed to the pump."""
        pump_fields = {f.name for f in dataclasses.fields(self.pump)}
        pump_changes = {k: changes.pop(k) for k in list(changes) if k in pump_fields}
        unknown = set(changes) - {f.name for f in dataclasses.fields(self)}
        if unknown:
            raise ConfigError(f"unknown parameter(s): {', '.join(sorted(unknown))}")
        new = dataclasses.replace(self, **changes)
        if pump_changes:
            new = dataclasses.replace(new, pump=dataclasses.replace(new.pump, **pump_changes))
        return new


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of :func:`validate`; ``ok`` is true exactly when there are no violations."""

    violations: tuple = ()
    warnings: tuple = ()

    @property
    def ok(self) -> bool:
        return not self.violations


BRANCHING_TOL = 1e-12


def validate(params: SystemParams) -> ValidationReport:
    """Check hard constraints and the orderings the closed forms rely on.

    Hard violations: negative or non-finite rates and Rabi frequencies,
    negative pump rates or branching ratios, closed branching that does not
    sum to 1, and ground-state decay in the closed configuration (which would
    leak population out of a trace-preserving model).  Warnings flag regime
    orderings Omega_p << Omega_b, Omega_c, r << Omega_mu.
    """
    violations = []
    warnings = []
    nonneg = ["omega_mu", "omega_b", "omega_c", "omega_p", "gamma_a", "gamma_b", "gamma_bp",
              "gamma_c", "gamma_cp"] + [dephasing_field(j, k) for j, k in PAIRS]
    for name in nonneg:
        value = getattr(params, name)
        if not math.isfinite(value):
            violations.append(("non-finite", f"{name} = {value} is not finite"))
        elif value < 0:
            violations.append(("negative-rate", f"{name} = {value} < 0"))
    for name in ("delta_p", "delta_mu", "delta_b", "delta_c"):
        if not math.isfinite(getattr(params, name)):
            violations.append(("non-finite", f"{name} is not finite"))

    pump = params.pump
    if isinstance(pump, OpenPump):
        for name in ("r_b", "r_cp"):
            if not getattr(pump, name) >= 0:
                violations.append(("negative-pump", f"{name} = {getattr(pump, name)} must be >= 0"))
        rates = [pump.r_b, pump.r_cp]
    else:
        if not pump.r >= 0:
            violations.append(("negative-pump", f"r = {pump.r} must be >= 0"))
        alphas = (pump.alpha_b, pump.alpha_c, pump.alpha_cp)
        if any(not a >= 0 for a in alphas):
            violations.append(("negative-branching", f"branching ratios {alphas} must be >= 0"))
        if abs(sum(alphas) - 1.0) > BRANCHING_TOL:
            violations.append(("branching-sum", f"alpha_b + alpha_c + alpha_cp = {sum(alphas)!r} != 1"))
        ground = [g for g in GROUND_LEVELS if params.decay(g) != 0]
        if ground:
            violations.append(("closed-ground-decay",
                               "closed pumping keeps population inside the five levels; "
                               f"ground decay must be 0 for {', '.join(ground)}"))
        if pump.alpha_cp == 0:
            warnings.append(("gain-impossible", "alpha_cp = 0: no population reaches |c'>, gain impossible"))
        rates = [pump.r]

    rf = [w for w in (params.omega_b, params.omega_c) if w > 0]
    if rf and params.omega_p >= 0.1 * min(rf):
        warnings.append(("probe-strength", "Omega_p >= 0.1 min(Omega_b, Omega_c); linear response may fail"))
    for name in ("omega_b", "omega_c"):
        if getattr(params, name) >= 0.5 * params.omega_mu:
            warnings.append(("rf-strength", f"{name} >= 0.5 Omega_mu; perturbative closed forms degrade"))
    if rf and max(rates) >= min(rf):
        warnings.append(("pump-rate", "pump rate >= min(Omega_b, Omega_c); closed forms assume r << Omega_b, Omega_c"))
    for value, name in ((params.p_b, "p_b"), (params.rho_cpcp, "rho_cpcp")):
        if value is not None and not math.isfinite(abs(value)):
            violations.append(("non-finite", f"{name} is not finite"))
    return ValidationReport(tuple(violations), tuple(warnings))


# ---------------------------------------------------------------------------
# presets

_THIRD = 1.0 / 3.0
_FIG3_DEPHASING = dict(gamma_ph_bc=1e-4, gamma_ph_bpc=1e-4, gamma_ph_bcp=1e-4,
                       gamma_ph_bpcp=1e-4, gamma_ph_ccp=1e-4, gamma_ph_bbp=1e-4)


def _fig2():
    return SystemParams(omega_mu=2.0, omega_b=0.1, omega_c=0.1,
                        gamma_b=1e-4, gamma_bp=1e-4, gamma_c=1e-4, gamma_cp=1e-4,
                        pump=OpenPump(r_b=1e-4, r_cp=0.007))


def _fig3(r=0.04):
    return SystemParams(omega_mu=2.0, omega_b=0.1, omega_c=0.1, **_FIG3_DEPHASING,
                        pump=ClosedPump(r=r, alpha_b=_THIRD, alpha_c=_THIRD, alpha_cp=_THIRD))


def _generalized(params, p_b=0.1, rho_cpcp=0.8):
    return dataclasses.replace(params, p_b=complex(p_b), rho_cpcp=float(rho_cpcp))


def _doppler():
    # dephasings vanish; r = 0.04 with equal branching gives exactly (0.1, 0.8)
    return SystemParams(omega_mu=2.0, omega_b=0.1, omega_c=0.1, p_b=0.1 + 0j, rho_cpcp=0.8,
                        pump=ClosedPump(r=0.04, alpha_b=_THIRD, alpha_c=_THIRD, alpha_cp=_THIRD))


PRESETS = {
    "fig2-open": _fig2,
    "fig3-closed": _fig3,
    "fig5-populations": lambda: _fig3(r=0.0),
    "fig6-dispersion": lambda: _generalized(_fig3(r=0.04)),
    "kash-rb87": lambda: _generalized(_fig3(r=0.04)),
    "doppler-fig8": _doppler,
    "doppler-fig9": _doppler,
}

# pump-rate variants plotted for the shipped figure presets
PUMP_VARIANTS = {
    "fig2-open": ("r_cp", (0.0, 0.002, 0.004, 0.007)),
    "fig3-closed": ("r", (0.0, 0.005, 0.01, 0.04)),
}


def preset(name: str) -> SystemParams:
    """Return the named parameter set.

    Raises
    ------
    UnknownPresetError
    """
    try:
        return PRESETS[name]()
    except KeyError:
        raise UnknownPresetError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}") from None


# ---------------------------------------------------------------------------
# serialization

_SCALAR_FIELDS = [f.name for f in dataclasses.fields(SystemParams)
                  if f.name not in ("pump", "pump_broadening", "p_b", "rho_cpcp")]


def to_dict(params: SystemParams) -> dict:
    """Plain-data view of the parameters (pump nested under ``pump``)."""
    out = {name: getattr(params, name) for name in _SCALAR_FIELDS}
    out["pump_broadening"] = params.pump_broadening
    out["p_b"] = None if params.p_b is None else repr(complex(params.p_b))
    out["rho_cpcp"] = params.rho_cpcp
    pump = {"variant": params.pump.variant}
    pump.update(dataclasses.asdict(params.pump))
    out["pump"] = pump
    return out


def _parse_bool(text):
    low = str(text).strip().lower()
    if low in ("true", "1", "yes"):
        return True
    if low in ("false", "0", "no"):
        return False
    raise ConfigError(f"expected a boolean, got {text!r}")


def _parse_float(key, text):
    try:
        return float(text)
    except (TypeError, ValueError):
        raise ConfigError(f"{key}: expected a number, got {text!r}") from None


def from_dict(data: dict) -> SystemParams:
    """Inverse of :func:`to_dict`; also accepts string values as read from a config file."""
    data = dict(data)
    pump_data = dict(data.pop("pump", {"variant": "closed"}))
    variant = str(pump_data.pop("variant", "closed")).strip()
    cls = {"open": OpenPump, "closed": ClosedPump}.get(variant)
    if cls is None:
        raise ConfigError(f"pump variant must be 'open' or 'closed', got {variant!r}")
    pump_names = {f.name for f in dataclasses.fields(cls)}
    unknown = set(pump_data) - pump_names
    if unknown:
        raise ConfigError(f"unknown {variant} pump key(s): {', '.join(sorted(unknown))}")
    pump = cls(**{k: _parse_float(k, v) for k, v in pump_data.items()})

    kwargs = {"pump": pump}
    for key, value in data.items():
        if key in _SCALAR_FIELDS:
            kwargs[key] = _parse_float(key, value)
        elif key == "pump_broadening":
            kwargs[key] = value if isinstance(value, bool) else _parse_bool(value)
        elif key == "p_b":
            if value is not None and str(value).lower() != "none":
                try:
                    kwargs[key] = complex(value)
                except ValueError:
                    raise ConfigError(f"p_b: expected a complex number, got {value!r}") from None
        elif key == "rho_cpcp":
            if value is not None and str(value).lower() != "none":
                kwargs[key] = _parse_float(key, value)
        else:
            raise ConfigError(f"unknown parameter {key!r}")
    return SystemParams(**kwargs)


def dumps(params: SystemParams) -> str:
    """Serialize to the INI-style config format (``[system]`` and ``[pump]`` sections)."""
    data = to_dict(params)
    pump = data.pop("pump")
    lines = ["[system]"]
    for key, value in data.items():
        if value is not None:
            lines.append(f"{key} = {value!r}" if isinstance(value, float) else f"{key} = {value}")
    lines += ["", "[pump]"]
    for key, value in pump.items():
        lines.append(f"{key} = {value!r}" if isinstance(value, float) else f"{key} = {value}")
    return "\n".join(lines) + "\n"


def loads(text: str) -> SystemParams:
    """Parse the config format written by :func:`dumps`.

    A ``preset`` key in ``[system]`` starts from that preset; every other key
    overrides it.  Missing keys keep their defaults.
    """
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse config: {exc}") from None
    extra = set(parser.sections()) - {"system", "pump"}
    if extra:
        raise ConfigError(f"unknown section(s): {', '.join(sorted(extra))}")
    system = dict(parser["system"]) if parser.has_section("system") else {}
    base_name = system.pop("preset", None)
    base = preset(base_name.strip()) if base_name else SystemParams()
    data = to_dict(base)
    if parser.has_section("pump"):
        pump = dict(parser["pump"])
        if "variant" in pump and pump["variant"].strip() != data["pump"]["variant"]:
            data["pump"] = {"variant": pump["variant"].strip()}
        data["pump"].update(pump)
    data.update(system)
    return from_dict(data)


def load_config(path) -> SystemParams:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return loads(text)


def save_config(params: SystemParams, path) -> None:
    Path(path).write_text(dumps(params))
