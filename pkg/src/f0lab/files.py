"""Model files and golden tables (YAML), with line-numbered errors."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .errors import GoldenFileError, InputError, ModelFileError
from .model import DegreeTuple, PureModel
from .poly import GeneratorSet, PolynomialSyntaxError, format_polynomial, parse_polynomial

GOLDEN_ENV = "F0LAB_GOLDEN_DIR"
GOLDEN_DIMS = (2, 4, 6, 8, 10, 12, 14, 16)
DATA_DIR = Path(__file__).parent / "data"


# ---------- YAML node helpers ----------

def _line(node) -> int:
    return node.start_mark.line + 1


def _mapping(node, what: str) -> dict[str, yaml.Node]:
    if not isinstance(node, yaml.MappingNode):
        raise ModelFileError(f"{what} must be a mapping", _line(node))
    out = {}
    for k, v in node.value:
        if not isinstance(k, yaml.ScalarNode):
            raise ModelFileError("keys must be plain strings", _line(k))
        out[k.value] = v
    return out


def _scalar(node, fld: str) -> str:
    if not isinstance(node, yaml.ScalarNode):
        raise ModelFileError("expected a scalar", _line(node), fld)
    return node.value


def _int(node, fld: str) -> int:
    s = _scalar(node, fld)
    try:
        return int(s)
    except ValueError:
        raise ModelFileError(f"expected an integer, got {s!r}", _line(node), fld) from None


def _compose(text: str):
    try:
        return yaml.compose(text)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        line = mark.line + 1 if mark else None
        raise ModelFileError(f"not valid YAML: {getattr(e, 'problem', e)}", line) from None


# ---------- model files ----------

def parse_model(text: str) -> PureModel:
    """Model from the model-file schema.

    The number of odd generators may differ from the number of even ones;
    such files describe graded algebras rather than F0 models.
    """
    root = _compose(text)
    if root is None:
        raise ModelFileError("empty model file")
    top = _mapping(root, "model file")
    for key in top:
        if key not in ("even_generators", "odd_generators"):
            raise ModelFileError("unknown field", _line(top[key]), key)
    for key in ("even_generators", "odd_generators"):
        if key not in top:
            raise ModelFileError("missing required field", _line(root), key)
        if not isinstance(top[key], yaml.SequenceNode):
            raise ModelFileError("must be a list", _line(top[key]), key)

    names, degrees = [], []
    for i, node in enumerate(top["even_generators"].value):
        entry = _mapping(node, "generator entry")
        where = f"even_generators[{i}]"
        for key in ("name", "degree"):
            if key not in entry:
                raise ModelFileError("missing field", _line(node), f"{where}.{key}")
        extra = set(entry) - {"name", "degree"}
        if extra:
            raise ModelFileError(f"unknown keys {sorted(extra)}", _line(node), where)
        names.append(_scalar(entry["name"], f"{where}.name"))
        degrees.append(_int(entry["degree"], f"{where}.degree"))
    if not names:
        raise ModelFileError("need at least one even generator", _line(top["even_generators"]),
                             "even_generators")
    try:
        gens = GeneratorSet(tuple(names), tuple(degrees))
    except (InputError, ValueError) as e:
        raise ModelFileError(str(e), _line(top["even_generators"]), "even_generators") from None

    odd_names, odd_degrees, diffs = [], [], []
    for i, node in enumerate(top["odd_generators"].value):
        entry = _mapping(node, "generator entry")
        where = f"odd_generators[{i}]"
        for key in ("name", "degree", "differential"):
            if key not in entry:
                raise ModelFileError("missing field", _line(node), f"{where}.{key}")
        extra = set(entry) - {"name", "degree", "differential"}
        if extra:
            raise ModelFileError(f"unknown keys {sorted(extra)}", _line(node), where)
        odd_names.append(_scalar(entry["name"], f"{where}.name"))
        deg = _int(entry["degree"], f"{where}.degree")
        odd_degrees.append(deg)
        dnode = entry["differential"]
        try:
            diffs.append(parse_polynomial(_scalar(dnode, f"{where}.differential"), gens, deg + 1))
        except (PolynomialSyntaxError, InputError, ValueError) as e:
            raise ModelFileError(str(e), _line(dnode), f"{where}.differential") from None
    try:
        return PureModel(gens, tuple(odd_degrees), tuple(diffs), tuple(odd_names))
    except InputError as e:
        raise ModelFileError(str(e), _line(top["odd_generators"]), "odd_generators") from None


def load_model(path: str | os.PathLike) -> PureModel:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as e:
        raise ModelFileError(f"cannot read {p}: {e.strerror}") from None
    return parse_model(text)


def dump_model(m: PureModel) -> str:
    lines = ["even_generators:"]
    for n, d in zip(m.gens.names, m.gens.degrees):
        lines.append(f"  - {{name: {n}, degree: {d}}}")
    lines.append("odd_generators:")
    for n, d, p in zip(m.odd_names, m.odd_degrees, m.differentials):
        lines.append(f"  - {{name: \"{n}\", degree: {d}, differential: \"{format_polynomial(p)}\"}}")
    return "\n".join(lines) + "\n"


def shipped_model(name: str) -> Path:
    return DATA_DIR / "models" / f"{name}.yaml"


# ---------- golden tables ----------

@dataclass(frozen=True)
class GoldenTable:
    dimension: int
    rows: tuple[tuple[DegreeTuple, int], ...]
    path: Path | None = field(default=None, compare=False)

    def as_dict(self) -> dict[DegreeTuple, int]:
        return dict(self.rows)


def golden_dir(override: str | os.PathLike | None = None) -> Path:
    if override is not None:
        return Path(override)
    env = os.environ.get(GOLDEN_ENV)
    return Path(env) if env else DATA_DIR / "golden"


def golden_path(directory: Path, dim: int) -> Path:
    return directory / f"dim{dim:02d}.yaml"


def parse_golden(text: str, source: str = "<golden>") -> GoldenTable:
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as e:
        raise GoldenFileError(f"{source}: not valid YAML ({e})") from None
    if not isinstance(data, dict) or "dimension" not in data or "rows" not in data:
        raise GoldenFileError(f"{source}: expected keys 'dimension' and 'rows'")
    dim = data["dimension"]
    if not isinstance(dim, int):
        raise GoldenFileError(f"{source}: dimension must be an integer")
    if not isinstance(data["rows"], list):
        raise GoldenFileError(f"{source}: rows must be a list")
    rows = []
    seen = set()
    for i, row in enumerate(data["rows"]):
        if not isinstance(row, dict) or set(row) != {"tuple", "chi"}:
            raise GoldenFileError(f"{source}: row {i} must have exactly 'tuple' and 'chi'")
        degs, chi = row["tuple"], row["chi"]
        if not isinstance(chi, int) or not isinstance(degs, list) or \
                not all(isinstance(x, int) for x in degs):
            raise GoldenFileError(f"{source}: row {i} has non-integer entries")
        try:
            t = DegreeTuple.from_degrees(degs)
        except InputError as e:
            raise GoldenFileError(f"{source}: row {i}: {e}") from None
        if t.dimension != dim:
            raise GoldenFileError(f"{source}: row {i} {t} has dimension {t.dimension}, not {dim}")
        if t in seen:
            raise GoldenFileError(f"{source}: row {i} repeats {t}")
        seen.add(t)
        rows.append((t, chi))
    return GoldenTable(dim, tuple(rows))


def load_golden(dim: int, directory: str | os.PathLike | None = None) -> GoldenTable:
    p = golden_path(golden_dir(directory), dim)
    if not p.is_file():
        raise GoldenFileError(f"missing golden file {p}")
    t = parse_golden(p.read_text(), str(p))
    if t.dimension != dim:
        raise GoldenFileError(f"{p}: declares dimension {t.dimension}, expected {dim}")
    return GoldenTable(t.dimension, t.rows, p)


def dump_golden(dim: int, rows) -> str:
    out = [f"dimension: {dim}", "rows:"]
    for t, chi in rows:
        out.append(f"  - {{tuple: [{', '.join(map(str, t.degrees()))}], chi: {chi}}}")
    return "\n".join(out) + "\n"

