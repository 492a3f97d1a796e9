"""Scenario configuration: TOML in, validated dataclasses out.

Every quantity carries its unit in the key name (period_ps, temperature_k),
unknown keys are hard errors, and parse -> serialize -> parse is identity.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field, fields

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .ensemble import DELTA_PROFILE, IntensityProfile, ThermalSpec, gaussian_beam_profile
from .mpm import MediumSpec, ProbePulse
from .observables import ProbeSpec
from .rotor import O2, MoleculeSpec
from .trains import InterleaveTemplate, Pulse, PulseTrain, interleaved_train, periodic_train

PS = 1e-12


class ConfigError(ValueError):
    pass


def _line_of(text: str, key: str) -> str:
    for i, line in enumerate(text.splitlines(), start=1):
        stripped = line.lstrip()
        if stripped.startswith(key) and stripped[len(key):].lstrip().startswith("="):
            return f" (line {i}: {line.strip()})"
    return ""


def _check_keys(section: str, data: dict, allowed: set[str], text: str):
    for k in data:
        if k not in allowed:
            raise ConfigError(f"unknown key '{section}.{k}'{_line_of(text, k)}")


def _positive(section: str, key: str, value, text: str):
    if value <= 0:
        raise ConfigError(f"'{section}.{key}' must be positive, got {value}{_line_of(text, key)}")
    return value


@dataclass(frozen=True)
class TrainConfig:
    kind: str = "periodic"
    count: int = 20
    P: float = 1.0
    period_ps: float | None = None          # periodic
    t1_ps: float | None = None              # interleaved
    t2_ps: float | None = None
    t3_ps: float | None = None
    t4_ps: float | None = None
    constrain_t3: bool = True
    base_count: int = 5
    times_ps: tuple[float, ...] = ()        # explicit
    strengths: tuple[float, ...] = ()

    def build(self) -> PulseTrain:
        if self.kind == "periodic":
            return periodic_train(self.count, self.period_ps * PS, self.P, label="periodic")
        if self.kind == "interleaved":
            tpl = self.template()
            return interleaved_train(tpl)
        pulses = tuple(Pulse(t * PS, p) for t, p in zip(self.times_ps, self.strengths))
        return PulseTrain(pulses, label="explicit")

    def template(self) -> InterleaveTemplate:
        if self.kind != "interleaved":
            raise ConfigError("train is not interleaved")
        return InterleaveTemplate(
            T4=self.t4_ps * PS,
            T1=self.t1_ps * PS,
            T2=self.t2_ps * PS,
            T3=None if self.t3_ps is None else self.t3_ps * PS,
            P=self.P,
            constrain_T3=self.constrain_t3,
            base_count=self.base_count,
        )


@dataclass(frozen=True)
class OutputConfig:
    directory: str = "runs/out"
    formats: tuple[str, ...] = ("csv", "json")


@dataclass(frozen=True)
class ScenarioConfig:
    molecule: MoleculeSpec = O2
    thermal: ThermalSpec = ThermalSpec()
    j_max: int = 128
    train: TrainConfig = TrainConfig()
    probe: ProbeSpec = ProbeSpec()
    mpm_probe: ProbePulse = ProbePulse()
    medium: MediumSpec = MediumSpec()
    profile: IntensityProfile = DELTA_PROFILE
    output: OutputConfig = OutputConfig()
    seed: int = 0
    threads: int = 0  # 0 means all cores


_TOP_KEYS = {"molecule", "thermal", "basis", "train", "probe", "mpm", "intensity_profile", "output", "seed", "threads"}


def apply_override(raw: dict, dotted: str, literal: str) -> None:
    """Set raw['a']['b'] = parsed literal for an override 'a.b=literal'."""
    try:
        value = tomllib.loads(f"v = {literal}")["v"]
    except tomllib.TOMLDecodeError:
        value = literal  # bare strings allowed without quotes
    node = raw
    *parents, leaf = dotted.split(".")
    for p in parents:
        node = node.setdefault(p, {})
        if not isinstance(node, dict):
            raise ConfigError(f"override path '{dotted}' crosses a non-table key")
    node[leaf] = value


def parse_config_text(text: str, overrides: dict[str, str] | None = None) -> ScenarioConfig:
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as e:
        raise ConfigError(f"config is not valid TOML: {e}") from None
    for dotted, literal in (overrides or {}).items():
        apply_override(raw, dotted, literal)
    _check_keys("top level", raw, _TOP_KEYS, text)

    mol = O2
    if "molecule" in raw:
        sec = raw["molecule"]
        _check_keys("molecule", sec, {"name", "b_cm", "d_cm", "delta_alpha_si", "parity"}, text)
        mol = MoleculeSpec(
            name=sec.get("name", "custom"),
            B=_positive("molecule", "b_cm", sec.get("b_cm", O2.B), text),
            D=sec.get("d_cm", O2.D if sec.get("name") == "O2" else 0.0),
            delta_alpha=sec.get("delta_alpha_si", O2.delta_alpha if sec.get("name") == "O2" else 0.0),
            parity=sec.get("parity", "odd" if sec.get("name") == "O2" else "both"),
        )

    thermal = ThermalSpec()
    if "thermal" in raw:
        sec = raw["thermal"]
        _check_keys("thermal", sec, {"temperature_k", "population_cutoff"}, text)
        thermal = ThermalSpec(
            temperature=_positive("thermal", "temperature_k", sec.get("temperature_k", 294.0), text),
            population_cutoff=sec.get("population_cutoff", 1e-3),
        )

    j_max = 128
    if "basis" in raw:
        _check_keys("basis", raw["basis"], {"j_max"}, text)
        j_max = int(_positive("basis", "j_max", raw["basis"].get("j_max", 128), text))

    train = TrainConfig()
    if "train" in raw:
        sec = dict(raw["train"])
        kind = sec.get("kind", "periodic")
        if kind not in ("periodic", "interleaved", "explicit"):
            raise ConfigError(f"'train.kind' must be periodic|interleaved|explicit{_line_of(text, 'kind')}")
        allowed = {
            "periodic": {"kind", "count", "p", "period_ps"},
            "interleaved": {"kind", "p", "t1_ps", "t2_ps", "t3_ps", "t4_ps", "constrain_t3", "base_count"},
            "explicit": {"kind", "times_ps", "strengths"},
        }[kind]
        _check_keys("train", sec, allowed, text)
        if kind == "periodic":
            train = TrainConfig(
                kind=kind,
                count=int(_positive("train", "count", sec.get("count", 20), text)),
                P=_positive("train", "p", sec.get("p", 1.0), text),
                period_ps=_positive("train", "period_ps", sec.get("period_ps", 11.6006), text),
            )
        elif kind == "interleaved":
            need = [k for k in ("t1_ps", "t2_ps", "t4_ps") if k not in sec]
            if need:
                raise ConfigError(f"interleaved train missing keys: {', '.join('train.' + k for k in need)}")
            if not sec.get("constrain_t3", True) and "t3_ps" not in sec:
                raise ConfigError("'train.t3_ps' required when constrain_t3 = false")
            for k in ("t1_ps", "t2_ps", "t3_ps", "t4_ps"):
                if k in sec:
                    _positive("train", k, sec[k], text)
            train = TrainConfig(
                kind=kind,
                P=_positive("train", "p", sec.get("p", 1.0), text),
                t1_ps=sec["t1_ps"],
                t2_ps=sec["t2_ps"],
                t3_ps=sec.get("t3_ps"),
                t4_ps=sec["t4_ps"],
                constrain_t3=sec.get("constrain_t3", True),
                base_count=int(_positive("train", "base_count", sec.get("base_count", 5), text)),
            )
        else:
            times = sec.get("times_ps", [])
            ps = sec.get("strengths", [])
            if not times or len(times) != len(ps):
                raise ConfigError("'train.times_ps' and 'train.strengths' must be equal-length, nonempty")
            train = TrainConfig(kind=kind, times_ps=tuple(float(x) for x in times), strengths=tuple(float(x) for x in ps))

    probe = ProbeSpec()
    if "probe" in raw:
        sec = raw["probe"]
        _check_keys("probe", sec, {"center_nm", "fwhm_nm", "side", "m_weighting"}, text)
        probe = ProbeSpec(
            center_wavelength_nm=_positive("probe", "center_nm", sec.get("center_nm", 400.8), text),
            fwhm_wavelength_nm=_positive("probe", "fwhm_nm", sec.get("fwhm_nm", 0.15), text),
            side=sec.get("side", "stokes"),
            m_weighting=sec.get("m_weighting", "coupling"),
        )

    mpm_probe, medium = ProbePulse(), MediumSpec()
    if "mpm" in raw:
        sec = raw["mpm"]
        _check_keys("mpm", sec, {"probe_center_nm", "probe_fwhm_ps", "probe_delay_ps", "phi0_per_atm", "pressure_atm"}, text)
        mpm_probe = ProbePulse(
            center_wavelength_nm=_positive("mpm", "probe_center_nm", sec.get("probe_center_nm", 400.8), text),
            fwhm_duration=_positive("mpm", "probe_fwhm_ps", sec.get("probe_fwhm_ps", 0.12), text) * PS,
            delay=sec.get("probe_delay_ps", 0.0) * PS,
        )
        medium = MediumSpec(
            phi0_per_atm=sec.get("phi0_per_atm", 60.0),
            pressure_atm=sec.get("pressure_atm", 1.0),
        )

    profile = DELTA_PROFILE
    if "intensity_profile" in raw:
        sec = raw["intensity_profile"]
        _check_keys("intensity_profile", sec, {"kind", "samples", "s_min"}, text)
        kind = sec.get("kind", "delta")
        if kind == "delta":
            profile = DELTA_PROFILE
        elif kind == "gaussian-beam":
            profile = gaussian_beam_profile(
                n=int(sec.get("samples", 8)),
                s_min=sec.get("s_min", 0.2),
            )
        else:
            raise ConfigError(f"'intensity_profile.kind' must be delta|gaussian-beam{_line_of(text, 'kind')}")

    output = OutputConfig()
    if "output" in raw:
        sec = raw["output"]
        _check_keys("output", sec, {"directory", "formats"}, text)
        output = OutputConfig(
            directory=sec.get("directory", "runs/out"),
            formats=tuple(sec.get("formats", ["csv", "json"])),
        )

    return ScenarioConfig(
        molecule=mol,
        thermal=thermal,
        j_max=j_max,
        train=train,
        probe=probe,
        mpm_probe=mpm_probe,
        medium=medium,
        profile=profile,
        output=output,
        seed=int(raw.get("seed", 0)),
        threads=int(raw.get("threads", 0)),
    )


def parse_config(path: str, overrides: dict[str, str] | None = None) -> ScenarioConfig:
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from None
    return parse_config_text(text, overrides)


def _toml_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, float)):
        return repr(v)
    if isinstance(v, str):
        return '"' + v.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_toml_value(x) for x in v) + "]"
    raise TypeError(f"cannot serialize {type(v)}")


def serialize_config(cfg: ScenarioConfig) -> str:
    """Emit the scenario as TOML (stdlib has no writer; keys stay sorted stably)."""
    out = [f"seed = {cfg.seed}", f"threads = {cfg.threads}", ""]
    m = cfg.molecule
    out += ["[molecule]"] + [
        f'name = {_toml_value(m.name)}',
        f"b_cm = {_toml_value(m.B)}",
        f"d_cm = {_toml_value(m.D)}",
        f"delta_alpha_si = {_toml_value(m.delta_alpha)}",
        f"parity = {_toml_value(m.parity)}",
        "",
    ]
    out += ["[thermal]", f"temperature_k = {_toml_value(cfg.thermal.temperature)}",
            f"population_cutoff = {_toml_value(cfg.thermal.population_cutoff)}", ""]
    out += ["[basis]", f"j_max = {cfg.j_max}", ""]
    t = cfg.train
    out.append("[train]")
    out.append(f"kind = {_toml_value(t.kind)}")
    if t.kind == "periodic":
        out += [f"count = {t.count}", f"p = {_toml_value(t.P)}", f"period_ps = {_toml_value(t.period_ps)}"]
    elif t.kind == "interleaved":
        out += [f"p = {_toml_value(t.P)}", f"t1_ps = {_toml_value(t.t1_ps)}", f"t2_ps = {_toml_value(t.t2_ps)}"]
        if t.t3_ps is not None:
            out.append(f"t3_ps = {_toml_value(t.t3_ps)}")
        out += [f"t4_ps = {_toml_value(t.t4_ps)}", f"constrain_t3 = {_toml_value(t.constrain_t3)}",
                f"base_count = {t.base_count}"]
    else:
        out += [f"times_ps = {_toml_value(t.times_ps)}", f"strengths = {_toml_value(t.strengths)}"]
    out.append("")
    out += ["[probe]", f"center_nm = {_toml_value(cfg.probe.center_wavelength_nm)}",
            f"fwhm_nm = {_toml_value(cfg.probe.fwhm_wavelength_nm)}", f"side = {_toml_value(cfg.probe.side)}",
            f"m_weighting = {_toml_value(cfg.probe.m_weighting)}", ""]
    out += ["[mpm]", f"probe_center_nm = {_toml_value(cfg.mpm_probe.center_wavelength_nm)}",
            f"probe_fwhm_ps = {_toml_value(cfg.mpm_probe.fwhm_duration / PS)}",
            f"probe_delay_ps = {_toml_value(cfg.mpm_probe.delay / PS)}",
            f"phi0_per_atm = {_toml_value(cfg.medium.phi0_per_atm)}",
            f"pressure_atm = {_toml_value(cfg.medium.pressure_atm)}", ""]
    out.append("[intensity_profile]")
    out.append(f"kind = {_toml_value(cfg.profile.kind)}")
    if cfg.profile.kind == "gaussian-beam":
        out.append(f"samples = {len(cfg.profile.samples)}")
        out.append(f"s_min = {_toml_value(cfg.profile.s_min)}")
    out.append("")
    out += ["[output]", f"directory = {_toml_value(cfg.output.directory)}",
            f"formats = {_toml_value(list(cfg.output.formats))}", ""]
    return "\n".join(out)
