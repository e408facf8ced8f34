"""Pair documents (JSON / TOML) and run reports.

Documents use 1-based indices and rationals as strings::

    {"dim_g": 2, "dim_h": 1,
     "brackets": [{"i": 1, "j": 2, "k": 2, "coeff": "1/1"},
                  {"i": 2, "j": 1, "k": 2, "coeff": "-1/1"}]}

Optional fields: ``name``, ``antisymmetrize`` (fill in [x_j, x_i] from
[x_i, x_j]), ``splitting_matrix`` (rows of rationals; columns are the new
basis vectors), ``aux_connection`` (entries {x, y, z, coeff} meaning
∇'_{x_x} x_y ∋ coeff x_z), ``truncation``, ``max_arity`` and ``choices``
(a list of {splitting_matrix, aux_connection, label} for comparisons).

Internally everything is 0-based.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

try:
    import tomllib
except ImportError:  # Python < 3.11
    import tomli as tomllib

from .graded_linear import InvalidInput, Q, qstr
from .lie_pair import Choices, LiePair, antisymmetrized, literal


# ---------------------------------------------------------------------------
# rendering


def render(x):
    """Turn nested results into JSON-native values; rationals become "p/q"."""
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, Fraction):
        return qstr(x)
    if isinstance(x, int):
        return x
    if isinstance(x, dict):
        return {_key(k): render(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [render(v) for v in x]
    raise TypeError(f"cannot render {type(x).__name__}")


def _key(k) -> str:
    if isinstance(k, str):
        return k
    if isinstance(k, Fraction):
        return qstr(k)
    if isinstance(k, (int, tuple)):
        return json.dumps(render(k), separators=(",", ":"))
    raise TypeError(f"cannot use {type(k).__name__} as a report key")


def dumps(obj, output: str = "json") -> str:
    data = render(obj)
    if output == "json":
        return json.dumps(data, indent=2, ensure_ascii=False) + "\n"
    if output == "text":
        return "\n".join(_text_lines(data)) + "\n"
    raise InvalidInput(f"unknown output format {output!r}")


def _text_lines(data, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(data, dict):
        for k, v in data.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.extend(_text_lines(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {json.dumps(v, ensure_ascii=False)}")
    elif isinstance(data, list):
        for v in data:
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}-")
                lines.extend(_text_lines(v, indent + 1))
            else:
                lines.append(f"{pad}- {json.dumps(v, ensure_ascii=False)}")
    else:
        lines.append(f"{pad}{json.dumps(data, ensure_ascii=False)}")
    return lines


# labels of basis vectors in reports (1-based letters)


def mono_str(mono) -> str:
    return "".join(f"ξ{k + 1}" for k in mono) or "1"


def word_str(word, letter: str = "b") -> str:
    return "".join(f"{letter}{k + 1}" for k in word) or "1"


def small_label(label) -> str:
    mono, word = label
    return f"{mono_str(mono)}⊗{word_str(word)}"


# ---------------------------------------------------------------------------
# documents


@dataclass
class PairDocument:
    pair: LiePair
    choices: Choices
    extra_choices: list = field(default_factory=list)
    truncation: int | None = None
    max_arity: int | None = None
    raw: dict = field(default_factory=dict)

    def digest(self) -> str:
        canon = json.dumps(self.raw, sort_keys=True, separators=(",", ":"), ensure_ascii=False)
        return hashlib.sha256(canon.encode()).hexdigest()


def _int(doc, key, where, required=True, default=None):
    if key not in doc:
        if required:
            raise InvalidInput(f"{where}: missing field {key!r}")
        return default
    v = doc[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise InvalidInput(f"{where}.{key}: expected an integer, got {v!r}")
    return v


def _rational(v, where):
    try:
        return Q(v)
    except InvalidInput as exc:
        raise InvalidInput(f"{where}: {exc}") from None


def _index(entry, key, n, where):
    v = _int(entry, key, where)
    if not 1 <= v <= n:
        raise InvalidInput(f"{where}.{key}: index {v} outside 1..{n}")
    return v - 1


def parse_matrix(rows, n: int, where: str = "splitting_matrix") -> tuple:
    if not isinstance(rows, list) or len(rows) != n:
        raise InvalidInput(f"{where}: expected {n} rows")
    out = []
    for r, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise InvalidInput(f"{where}[{r}]: expected {n} entries")
        out.append(tuple(_rational(v, f"{where}[{r}][{c}]") for c, v in enumerate(row)))
    return tuple(out)


def parse_aux(entries, n: int, where: str = "aux_connection") -> dict:
    if not isinstance(entries, list):
        raise InvalidInput(f"{where}: expected a list of entries")
    aux: dict = {}
    for e, entry in enumerate(entries):
        w = f"{where}[{e}]"
        if not isinstance(entry, dict):
            raise InvalidInput(f"{w}: expected a table")
        x, y, z = (_index(entry, key, n, w) for key in ("x", "y", "z"))
        if "coeff" not in entry:
            raise InvalidInput(f"{w}: missing field 'coeff'")
        c = _rational(entry["coeff"], f"{w}.coeff")
        col = aux.setdefault((x, y), {})
        col[z] = col.get(z, Fraction(0)) + c
    aux = {k: {z: c for z, c in col.items() if c} for k, col in aux.items()}
    return {k: col for k, col in aux.items() if col}


def _parse_choices(doc, n, where, label="") -> Choices:
    split = doc.get("splitting_matrix")
    aux = doc.get("aux_connection")
    return Choices(
        parse_matrix(split, n, f"{where}splitting_matrix") if split is not None else None,
        parse_aux(aux, n, f"{where}aux_connection") if aux is not None else None,
        label=doc.get("label", label),
    )


def parse_document(doc: dict) -> PairDocument:
    if not isinstance(doc, dict):
        raise InvalidInput("document: expected a table at top level")
    n = _int(doc, "dim_g", "document")
    m = _int(doc, "dim_h", "document")
    if n < 0 or m < 0:
        raise InvalidInput("document: dimensions must be non-negative")
    if m > n:
        raise InvalidInput(f"document: dim_h = {m} exceeds dim_g = {n}")
    entries = doc.get("brackets", [])
    if not isinstance(entries, list):
        raise InvalidInput("brackets: expected a list")
    quads = []
    for e, entry in enumerate(entries):
        w = f"brackets[{e}]"
        if not isinstance(entry, dict):
            raise InvalidInput(f"{w}: expected a table")
        i, j, k = (_index(entry, key, n, w) for key in ("i", "j", "k"))
        if "coeff" not in entry:
            raise InvalidInput(f"{w}: missing field 'coeff'")
        quads.append((i, j, k, _rational(entry["coeff"], f"{w}.coeff")))
    anti = doc.get("antisymmetrize", False)
    if not isinstance(anti, bool):
        raise InvalidInput("antisymmetrize: expected true or false")
    br = antisymmetrized(n, quads) if anti else literal(quads)
    pair = LiePair(n, m, br, name=str(doc.get("name", "document")))
    choices = _parse_choices(doc, n, "")
    extra = []
    for c, ch in enumerate(doc.get("choices", []) or []):
        if not isinstance(ch, dict):
            raise InvalidInput(f"choices[{c}]: expected a table")
        extra.append(_parse_choices(ch, n, f"choices[{c}].", label=f"choice {c + 1}"))
    return PairDocument(
        pair=pair,
        choices=choices,
        extra_choices=extra,
        truncation=_int(doc, "truncation", "document", required=False),
        max_arity=_int(doc, "max_arity", "document", required=False),
        raw=json.loads(json.dumps(doc, default=str)),
    )


def read_data(path: str | Path):
    """Load a JSON or TOML file (by extension; JSON otherwise)."""
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise InvalidInput(f"{p}: cannot read ({exc.strerror})") from None
    if p.suffix.lower() == ".toml":
        try:
            return tomllib.loads(text)
        except tomllib.TOMLDecodeError as exc:
            raise InvalidInput(f"{p}: {exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{p}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def load_document(path: str | Path) -> PairDocument:
    return parse_document(read_data(path))


def pair_to_document(pair: LiePair, choices: Choices | None = None) -> dict:
    """Inverse of parse_document for a pair (and optional choices)."""
    doc: dict = {"name": pair.name, "dim_g": pair.dim_g, "dim_h": pair.dim_h, "brackets": []}
    for (i, j) in sorted(pair.brackets):
        for k, c in sorted(pair.brackets[(i, j)].items()):
            doc["brackets"].append({"i": i + 1, "j": j + 1, "k": k + 1, "coeff": qstr(c)})
    if choices is not None:
        if choices.splitting is not None:
            doc["splitting_matrix"] = [[qstr(v) for v in row] for row in choices.splitting]
        if choices.aux:
            doc["aux_connection"] = [
                {"x": x + 1, "y": y + 1, "z": z + 1, "coeff": qstr(c)}
                for (x, y) in sorted(choices.aux)
                for z, c in sorted(choices.aux[(x, y)].items())
            ]
    return doc


# ---------------------------------------------------------------------------
# reports


@dataclass
class Check:
    name: str
    passed: bool
    witness: object = None
    detail: object = None

    def to_dict(self) -> dict:
        out = {"name": self.name, "passed": self.passed}
        if self.witness is not None or not self.passed:
            out["witness"] = render(self.witness)
        if self.detail is not None:
            out["detail"] = render(self.detail)
        return out


@dataclass
class RunReport:
    command: str
    digest: str = ""
    options: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    tables: dict = field(default_factory=dict)
    error: dict | None = None

    def add(self, name, passed, witness=None, detail=None) -> Check:
        c = Check(name, bool(passed), witness, detail)
        self.checks.append(c)
        return c

    @property
    def passed(self) -> bool:
        return self.error is None and all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        out = {
            "command": self.command,
            "input_digest": self.digest,
            "options": render(self.options),
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
            "tables": render(self.tables),
        }
        if self.error is not None:
            out["error"] = render(self.error)
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "RunReport":
        rep = cls(d["command"], d.get("input_digest", ""), d.get("options", {}), [], d.get("tables", {}),
                  d.get("error"))
        for c in d.get("checks", []):
            rep.checks.append(Check(c["name"], c["passed"], c.get("witness"), c.get("detail")))
        return rep
