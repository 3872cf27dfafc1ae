"""
Reading and writing spacing-lab artifacts.

Every artifact is plain text whose first line names its kind and format
version, e.g. ``# configuration v1 model_tag=gue seed=7 sampler=tridiagonal``.
Floats are written with repr so a save/load cycle is bit-exact.
"""
import csv
import logging
import math
import os
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from dotenv.parser import parse_stream
from slugify import slugify

from ..errors import DomainError, ParseError
from ..models.configuration import Configuration, McmcParams, SamplerKind
from ..models.ensemble import EnsembleModel, InvariantModel, RepulsiveModel
from ..models.gaudin_table import TABLE_FORMAT_VERSION, GaudinTable
from ..models.measure import EquilibriumMeasure
from ..models.potential import Interaction, Potential
from ..models.spacing import IntervalSpec
from ..models.study import GaudinParams, StudyConfig

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1
MODEL_KEYS = {"name", "model", "V.coeffs", "f.coeffs", "Q.coeffs", "J", "h.gamma", "h.width", "h.form"}
STUDY_KEYS = {
    "model", "n", "interval", "window", "replicas", "seed", "output_dir", "sampler",
    "gaudin.smax", "gaudin.step", "gaudin.order",
    "mcmc.burn_in", "mcmc.thinning", "mcmc.step", "mcmc.target",
}


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _float(text: str, path: str, line: int) -> float:
    try:
        return float(text)
    except ValueError:
        raise ParseError(f"'{text}' is not a number", path, line)


def _int(text: str, path: str, line: int) -> int:
    try:
        return int(text)
    except ValueError:
        raise ParseError(f"'{text}' is not an integer", path, line)


class PersistenceService:
    """Versioned text formats for configurations, tables, measures, reports, models and studies."""

    # =========================
    # Headers
    # =========================
    @staticmethod
    def header_line(kind: str, **meta) -> str:
        fields = " ".join(f"{key}={_fmt(value)}" for key, value in meta.items())
        return f"# {kind} v{FORMAT_VERSION}" + (f" {fields}" if fields else "")

    @staticmethod
    def parse_header(line: str, kind: str, path: str) -> Dict[str, str]:
        """
        Split a header line into its key=value fields.

        Raises:
            ParseError: wrong kind, wrong version or a malformed field
        """
        if not line.startswith("#"):
            raise ParseError(f"missing '# {kind}' header line", path, 1)
        tokens = line[1:].split()
        if len(tokens) < 2 or tokens[0] != kind:
            raise ParseError(f"expected a '{kind}' header", path, 1)
        if tokens[1] != f"v{FORMAT_VERSION}":
            raise ParseError(f"unsupported {kind} format version '{tokens[1]}'", path, 1)
        meta = {}
        for token in tokens[2:]:
            key, sep, value = token.partition("=")
            if not sep:
                raise ParseError(f"malformed header field '{token}'", path, 1)
            meta[key] = value
        return meta

    @staticmethod
    def _read_lines(path: str) -> List[str]:
        try:
            with open(path, encoding="utf-8") as handle:
                lines = handle.read().splitlines()
        except OSError as e:
            raise ParseError(f"cannot read file: {e}", path)
        if not lines:
            raise ParseError("empty file", path)
        return lines

    # =========================
    # Configurations
    # =========================
    @staticmethod
    def save_configuration(x: Configuration, path: str) -> None:
        meta = {
            "model_tag": x.model_tag,
            "seed": x.seed,
            "sampler": x.sampler.value,
            "n": x.n,
            "unfolded": int(x.unfolded),
        }
        if x.acceptance_rate is not None:
            meta["acceptance_rate"] = x.acceptance_rate
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(PersistenceService.header_line("configuration", **meta) + "\n")
            for value in x.points:
                handle.write(repr(float(value)) + "\n")

    @staticmethod
    def load_configuration(path: str) -> Configuration:
        lines = PersistenceService._read_lines(path)
        meta = PersistenceService.parse_header(lines[0], "configuration", path)
        for key in ("model_tag", "seed", "sampler", "n"):
            if key not in meta:
                raise ParseError(f"header is missing '{key}'", path, 1)
        points = [_float(text, path, number) for number, text in enumerate(lines[1:], start=2) if text.strip()]
        if len(points) != _int(meta["n"], path, 1):
            raise ParseError(f"header announces {meta['n']} points, file holds {len(points)}", path)
        try:
            sampler = SamplerKind(meta["sampler"])
        except ValueError:
            raise ParseError(f"unknown sampler '{meta['sampler']}'", path, 1)
        acceptance = meta.get("acceptance_rate")
        try:
            return Configuration(
                np.array(points),
                model_tag=meta["model_tag"],
                seed=_int(meta["seed"], path, 1),
                sampler=sampler,
                unfolded=meta.get("unfolded", "0") == "1",
                acceptance_rate=float(acceptance) if acceptance is not None else None
            )
        except DomainError as e:
            raise ParseError(str(e), path)

    @staticmethod
    def configuration_name(x: Configuration, replica: int) -> str:
        return f"{x.model_tag}-n{x.n}-r{replica:04d}.csv"

    @staticmethod
    def load_configurations(directory: str) -> List[Tuple[str, Configuration]]:
        """All configuration files of a directory, in file-name order."""
        names = sorted(name for name in os.listdir(directory) if name.endswith(".csv"))
        return [(name, PersistenceService.load_configuration(os.path.join(directory, name))) for name in names]

    # =========================
    # Gaudin tables
    # =========================
    @staticmethod
    def gaudin_cache_name(s_max: float, step: float, m: int) -> str:
        return f"gaudin-v{TABLE_FORMAT_VERSION}-smax{s_max!r}-step{step!r}-m{m}.csv"

    @staticmethod
    def save_gaudin_table(table: GaudinTable, path: str) -> None:
        with open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write(
                PersistenceService.header_line("gaudin-table", smax=table.s_max, step=table.step, m=table.order) + "\n"
            )
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(("s", "E", "G"))
            for row in zip(table.s_grid, table.e_values, table.g_values):
                writer.writerow([repr(float(v)) for v in row])

    @staticmethod
    def load_gaudin_table(path: str) -> GaudinTable:
        lines = PersistenceService._read_lines(path)
        meta = PersistenceService.parse_header(lines[0], "gaudin-table", path)
        for key in ("smax", "step", "m"):
            if key not in meta:
                raise ParseError(f"header is missing '{key}'", path, 1)
        if len(lines) < 2 or lines[1].strip() != "s,E,G":
            raise ParseError("expected the column line 's,E,G'", path, 2)
        columns = []
        for number, text in enumerate(lines[2:], start=3):
            fields = text.split(",")
            if len(fields) != 3:
                raise ParseError(f"expected 3 columns, found {len(fields)}", path, number)
            columns.append([_float(v, path, number) for v in fields])
        data = np.array(columns)
        try:
            return GaudinTable(
                s_grid=data[:, 0],
                e_values=data[:, 1],
                g_values=data[:, 2],
                order=_int(meta["m"], path, 1),
                step=_float(meta["step"], path, 1)
            )
        except (DomainError, IndexError) as e:
            raise ParseError(f"invalid table: {e}", path)

    # =========================
    # Measures and reports
    # =========================
    @staticmethod
    def save_measure(m: EquilibriumMeasure, path: str) -> None:
        with open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write(PersistenceService.header_line("equilibrium-measure", a=m.a, b=m.b, mass=m.mass) + "\n")
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(("t", "density", "cdf"))
            for row in zip(m.density_t, m.density_values, m.cdf_values):
                writer.writerow([repr(float(v)) for v in row])

    @staticmethod
    def save_report(path: str, kind: str, header: Sequence[str], rows: Iterable[Sequence], **meta) -> None:
        with open(path, "w", encoding="utf-8", newline="") as handle:
            handle.write(PersistenceService.header_line(kind, **meta) + "\n")
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([_fmt(v) for v in row])

    @staticmethod
    def load_report(path: str, kind: str) -> Tuple[Dict[str, str], List[str], List[List[str]]]:
        lines = PersistenceService._read_lines(path)
        meta = PersistenceService.parse_header(lines[0], kind, path)
        if len(lines) < 2:
            raise ParseError("report has no column line", path, 2)
        reader = list(csv.reader(lines[1:]))
        header, rows = reader[0], reader[1:]
        for number, row in enumerate(rows, start=3):
            if len(row) != len(header):
                raise ParseError(f"expected {len(header)} columns, found {len(row)}", path, number)
        return meta, header, rows

    @staticmethod
    def save_dat(path: str, rows: Iterable[Tuple[float, float, float]], comment: str = "") -> None:
        """gnuplot-ready columns: x y yerr."""
        with open(path, "w", encoding="utf-8") as handle:
            if comment:
                handle.write(f"# {comment}\n")
            handle.write("# x y yerr\n")
            for x, y, err in rows:
                handle.write(f"{_fmt(float(x))} {_fmt(float(y))} {_fmt(float(err))}\n")

    # =========================
    # Key=value files
    # =========================
    @staticmethod
    def _bindings(path: str) -> List[Tuple[str, str, int]]:
        """(key, value, line) triples in file order; repeated keys are kept."""
        try:
            with open(path, encoding="utf-8") as handle:
                bindings = list(parse_stream(handle))
        except OSError as e:
            raise ParseError(f"cannot read file: {e}", path)
        entries = []
        for binding in bindings:
            line = binding.original.line
            if binding.error:
                raise ParseError(f"cannot parse '{binding.original.string.strip()}'", path, line)
            if binding.key is None:
                continue
            if binding.value is None:
                raise ParseError(f"key '{binding.key}' has no value", path, line)
            entries.append((binding.key, binding.value.strip(), line))
        return entries

    @staticmethod
    def _coefficients(text: str, path: str, line: int) -> Tuple[float, ...]:
        return tuple(_float(part.strip(), path, line) for part in text.split(",") if part.strip())

    @staticmethod
    def model_tag(name: Optional[str], path: str) -> str:
        stem = os.path.splitext(os.path.basename(path))[0]
        return slugify(name or stem) or "model"

    @staticmethod
    def load_model(path: str) -> EnsembleModel:
        """
        Parse a flat key=value model file.

        Example:
            name = quartic
            V.coeffs = 0,0,0,0,1
            J = -inf,inf

        A file with Q.coeffs or h.* keys describes a repulsive system.
        """
        values: Dict[str, Tuple[str, int]] = {}
        for key, value, line in PersistenceService._bindings(path):
            if key not in MODEL_KEYS:
                raise ParseError(f"unknown key '{key}'", path, line)
            if key in values:
                raise ParseError(f"duplicate key '{key}'", path, line)
            values[key] = (value, line)

        lower, upper = -math.inf, math.inf
        if "J" in values:
            text, line = values["J"]
            bounds = PersistenceService._coefficients(text, path, line)
            if len(bounds) != 2:
                raise ParseError("J needs two bounds", path, line)
            lower, upper = bounds

        def potential(key: str) -> Optional[Potential]:
            if key not in values:
                return None
            text, line = values[key]
            try:
                return Potential(PersistenceService._coefficients(text, path, line), lower=lower, upper=upper)
            except DomainError as e:
                raise ParseError(str(e), path, line)

        name = values.get("name", (None, 0))[0]
        tag = PersistenceService.model_tag(name, path)
        declared = values.get("model", (None, 0))
        repulsive = any(k in values for k in ("Q.coeffs", "h.gamma", "h.width"))
        if declared[0] is not None and declared[0] not in ("invariant", "repulsive"):
            raise ParseError(f"unknown model kind '{declared[0]}'", path, declared[1])
        if declared[0] == "repulsive" or (declared[0] is None and repulsive):
            q = potential("Q.coeffs")
            if q is None or "h.gamma" not in values or "h.width" not in values:
                raise ParseError("a repulsive model needs Q.coeffs, h.gamma and h.width", path)
            form, form_line = values.get("h.form", ("gaussian", 0))
            if form != "gaussian":
                raise ParseError(f"unsupported interaction form '{form}'", path, form_line)
            try:
                h = Interaction(
                    _float(values["h.gamma"][0], path, values["h.gamma"][1]),
                    _float(values["h.width"][0], path, values["h.width"][1])
                )
            except DomainError as e:
                raise ParseError(str(e), path, values["h.width"][1])
            model: EnsembleModel = RepulsiveModel(q, h, tag=tag)
        else:
            v = potential("V.coeffs")
            if v is None:
                raise ParseError("an invariant model needs V.coeffs", path)
            model = InvariantModel(v, potential("f.coeffs"), tag=tag)
        logger.info(f"Loaded {model.kind.value} model '{tag}' from {path}")
        return model

    @staticmethod
    def save_model(model: EnsembleModel, path: str) -> None:
        def coeffs(p: Potential) -> str:
            return ",".join(repr(c) for c in p.coefficients)

        confining = model.confining
        lines = [f"name = {model.tag}", f"model = {model.kind.value}"]
        if isinstance(model, RepulsiveModel):
            lines += [f"Q.coeffs = {coeffs(model.q)}", f"h.gamma = {model.h.gamma!r}",
                      f"h.width = {model.h.width!r}", f"h.form = {model.h.form}"]
        else:
            lines.append(f"V.coeffs = {coeffs(model.v)}")
            if model.f is not None:
                lines.append(f"f.coeffs = {coeffs(model.f)}")
        lines.append(f"J = {confining.lower!r},{confining.upper!r}")
        with open(path, "w", encoding="utf-8") as handle:
            handle.write("\n".join(lines) + "\n")

    @staticmethod
    def load_study(path: str, defaults=None) -> StudyConfig:
        """
        Parse a study file; ``n``, ``interval`` and ``window`` may repeat.
        The model path is resolved relative to the study file.
        """
        single: Dict[str, Tuple[str, int]] = {}
        sizes: List[int] = []
        intervals: List[IntervalSpec] = []
        windows: List[float] = []
        for key, value, line in PersistenceService._bindings(path):
            if key not in STUDY_KEYS:
                raise ParseError(f"unknown key '{key}'", path, line)
            if key == "n":
                sizes.extend(_int(part.strip(), path, line) for part in value.split(",") if part.strip())
            elif key == "interval":
                try:
                    intervals.append(IntervalSpec.parse(value))
                except DomainError as e:
                    raise ParseError(str(e), path, line)
            elif key == "window":
                windows.extend(_float(part.strip(), path, line) for part in value.split(",") if part.strip())
            elif key in single:
                raise ParseError(f"duplicate key '{key}'", path, line)
            else:
                single[key] = (value, line)

        if "model" not in single:
            raise ParseError("study file needs a 'model' key", path)
        model_path = os.path.join(os.path.dirname(os.path.abspath(path)), single["model"][0])
        model = PersistenceService.load_model(model_path)

        def get(key, cast, fallback):
            if key not in single:
                return fallback
            text, line = single[key]
            return cast(text, path, line)

        gaudin = GaudinParams(
            s_max=get("gaudin.smax", _float, getattr(defaults, "GAUDIN_SMAX", 5.0)),
            step=get("gaudin.step", _float, getattr(defaults, "GAUDIN_STEP", 0.005)),
            order=get("gaudin.order", _int, getattr(defaults, "GAUDIN_ORDER", 40))
        )
        sampler_text = single.get("sampler", ("auto", 0))
        sampler = None
        if sampler_text[0] != "auto":
            try:
                sampler = SamplerKind(sampler_text[0])
            except ValueError:
                raise ParseError(f"unknown sampler '{sampler_text[0]}'", path, sampler_text[1])
        base_mcmc = McmcParams.from_config(defaults) if defaults is not None else McmcParams()
        try:
            mcmc = McmcParams(
                burn_in=get("mcmc.burn_in", _int, base_mcmc.burn_in),
                thinning=get("mcmc.thinning", _int, base_mcmc.thinning),
                initial_step=get("mcmc.step", _float, base_mcmc.initial_step),
                target_acceptance=get("mcmc.target", _float, base_mcmc.target_acceptance)
            )
            return StudyConfig(
                model=model,
                sizes=tuple(sizes),
                intervals=tuple(intervals),
                window_lengths=tuple(windows),
                replicas=get("replicas", _int, 100),
                base_seed=get("seed", _int, 0),
                gaudin=gaudin,
                output_dir=single["output_dir"][0] if "output_dir" in single else None,
                sampler=sampler,
                mcmc=mcmc,
                model_path=model_path
            )
        except DomainError as e:
            raise ParseError(str(e), path)

    @staticmethod
    def save_study(config: StudyConfig, path: str) -> None:
        """
        Write a study file that load_study reads back to an equal config.
        Without a model path the model is written next to the study as <tag>.model.
        """
        directory = os.path.dirname(os.path.abspath(path))
        model_path = config.model_path
        if model_path is None:
            model_path = os.path.join(directory, f"{config.model.tag}.model")
            PersistenceService.save_model(config.model, model_path)

        lines = [f"model = {os.path.relpath(os.path.abspath(model_path), directory)}"]
        lines += [f"n = {n}" for n in config.sizes]
        lines += [f"interval = {spec.label}" for spec in config.intervals]
        lines += [f"window = {length!r}" for length in config.window_lengths]
        lines += [
            f"replicas = {config.replicas}",
            f"seed = {config.base_seed}",
            f"sampler = {config.sampler.value if config.sampler else 'auto'}",
            f"gaudin.smax = {config.gaudin.s_max!r}",
            f"gaudin.step = {config.gaudin.step!r}",
            f"gaudin.order = {config.gaudin.order}",
            f"mcmc.burn_in = {config.mcmc.burn_in}",
            f"mcmc.thinning = {config.mcmc.thinning}",
            f"mcmc.target = {config.mcmc.target_acceptance!r}",
        ]
        if config.mcmc.initial_step is not None:
            lines.append(f"mcmc.step = {config.mcmc.initial_step!r}")
        if config.output_dir:
            lines.append(f"output_dir = {config.output_dir}")
        with open(path, "w", encoding="utf-8") as handle:
            handle.write("\n".join(lines) + "\n")
        logger.info(f"Study '{config.model.tag}' saved to {path}")
