"""JSON (schema 1) for families, certificates and verdicts.

Every scalar is written as an exact string. A "basis" is always a matrix whose
columns are the basis vectors. Output uses sorted keys and two-space indents
so identical inputs give byte-identical files.
"""

import json

from .errors import ParseError
from .family import FormFamily
from .fields import FieldValue, QQt, field_from_dict
from .forms import BilinearForm
from .hyperreal import HyperFamily
from .linalg import Matrix, Subspace
from .operators import RootDatum
from .pipeline import Disproof, Indeterminate, OrthoCertificate
from .ultrafilter import StableTailFamily

SCHEMA = 1
MODES = ("finite", "stable_tail", "hyper")


def dumps(obj):
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def format_path(path):
    out = ""
    for k in path:
        out += f"[{k}]" if isinstance(k, int) else (f".{k}" if out else k)
    return out or "<root>"


def _fail(path, message):
    raise ParseError(f"{format_path(path)}: {message}", path)


def value_offsets(text):
    """Map each JSON path (tuple of keys and indices) to the offset of its value."""
    dec = json.JSONDecoder()
    ws = " \t\n\r"
    out = {}

    def skip(i):
        while i < len(text) and text[i] in ws:
            i += 1
        return i

    def walk(i, path):
        i = skip(i)
        out[path] = i
        ch = text[i]
        if ch == "{":
            i = skip(i + 1)
            if text[i] == "}":
                return i + 1
            while True:
                key, i = dec.raw_decode(text, skip(i))
                i = skip(i) + 1  # colon
                i = skip(walk(i, path + (key,)))
                if text[i] == "}":
                    return i + 1
                i += 1  # comma
        if ch == "[":
            i = skip(i + 1)
            if text[i] == "]":
                return i + 1
            k = 0
            while True:
                i = skip(walk(i, path + (k,)))
                k += 1
                if text[i] == "]":
                    return i + 1
                i += 1
        _val, i = dec.raw_decode(text, i)
        return i

    walk(0, ())
    return out


def _line_col(text, offset):
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, col


def loads(text, source="<input>"):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from None


def _read(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from None


def parse_text(text, parser, source="<input>"):
    """Run ``parser`` on decoded JSON; anchor any error at its line and column."""
    data = loads(text, source)
    try:
        return parser(data)
    except ParseError as exc:
        if exc.path is None:
            raise ParseError(f"{source}: {exc}") from None
        path = exc.path
        offsets = value_offsets(text)
        while path not in offsets and path:
            path = path[:-1]
        line, col = _line_col(text, offsets.get(path, 0))
        raise ParseError(f"{source}:{line}:{col}: {exc}", exc.path) from None


def load_file(path):
    return loads(_read(path), path)


# matrices --------------------------------------------------------------------

def matrix_to_json(m):
    return m.to_strings()


def _scalar(field, value, path):
    if not isinstance(value, str):
        _fail(path, f"scalars must be strings, got {type(value).__name__}")
    try:
        return field.parse(value)
    except (ParseError, ZeroDivisionError) as exc:
        _fail(path, str(exc))


def matrix_from_json(field, rows, path, nrows=None, ncols=None):
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        _fail(path, "expected a list of rows")
    if nrows is not None and len(rows) != nrows:
        _fail(path, f"expected {nrows} rows, got {len(rows)}")
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    out = []
    for i, r in enumerate(rows):
        if len(r) != ncols:
            _fail(path + (i,), f"expected {ncols} entries, got {len(r)}")
        out.append(tuple(_scalar(field, x, path + (i, j)) for j, x in enumerate(r)))
    return Matrix._make(field, tuple(out), ncols)


def _form(field, rows, dim, path):
    m = matrix_from_json(field, rows, path, dim, dim)
    if not m.is_symmetric():
        _fail(path, "Gram matrix is not symmetric")
    return BilinearForm(m)


def basis_to_json(field, vectors, ambient):
    return matrix_to_json(Matrix.from_columns(field, vectors, ambient))


def subspace_to_json(s):
    return {"ambient": s.ambient, "dim": s.dim,
            "basis": basis_to_json(s.field, s.basis, s.ambient)}


def subspace_from_json(field, d, path=()):
    if not isinstance(d, dict) or "basis" not in d or "ambient" not in d:
        _fail(path, "expected a subspace object")
    n = d["ambient"]
    m = matrix_from_json(field, d["basis"], path + ("basis",), n)
    return Subspace.span(field, n, m.columns())


def values_to_json(values):
    return [str(v) for v in values]


# families --------------------------------------------------------------------

def family_to_dict(f, stratum=None):
    if isinstance(f, HyperFamily):
        d = {"field": QQt.to_dict(), "dim": f.dim, "mode": "hyper",
             "forms": [matrix_to_json(f.gram_t)]}
    elif isinstance(f, StableTailFamily):
        d = {"field": f.field.to_dict(), "dim": f.dim, "mode": "stable_tail",
             "forms": [matrix_to_json(m.gram) for m in f.prefix],
             "tail": matrix_to_json(f.tail.gram)}
    elif isinstance(f, FormFamily):
        d = {"field": f.field.to_dict(), "dim": f.dim, "mode": "finite",
             "forms": [matrix_to_json(m.gram) for m in f.members]}
        if f.labels is not None:
            d["labels"] = list(f.labels)
    else:
        raise TypeError(f"cannot serialize {type(f).__name__}")
    d["schema"] = SCHEMA
    if stratum is not None:
        d["stratum"] = stratum
    return d


def _field(d, path):
    if not isinstance(d.get("field"), dict):
        _fail(path + ("field",), "expected an object")
    try:
        return field_from_dict(d["field"])
    except ParseError as exc:
        _fail(path + ("field",), str(exc))


def family_from_dict(d, path=()):
    """Parse a family file into FormFamily, StableTailFamily or HyperFamily."""
    if not isinstance(d, dict):
        _fail(path, "expected a JSON object")
    if d.get("schema") != SCHEMA:
        _fail(path + ("schema",), f"expected {SCHEMA}, got {d.get('schema')!r}")
    field = _field(d, path)
    dim = d.get("dim")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 0:
        _fail(path + ("dim",), "expected a non-negative integer")
    mode = d.get("mode", "finite")
    if mode not in MODES:
        _fail(path + ("mode",), f"expected one of {', '.join(MODES)}")
    forms = d.get("forms")
    if not isinstance(forms, list):
        _fail(path + ("forms",), "expected a list of matrices")
    members = [_form(field, g, dim, path + ("forms", i)) for i, g in enumerate(forms)]
    if mode == "stable_tail":
        if "tail" not in d:
            _fail(path, "'tail' is required in stable_tail mode")
        return StableTailFamily(members, _form(field, d["tail"], dim, path + ("tail",)))
    if "tail" in d:
        _fail(path + ("tail",), "only allowed in stable_tail mode")
    if mode == "hyper":
        if field != QQt:
            _fail(path + ("field",), "hyper mode needs kind Qt")
        if len(members) != 1:
            _fail(path + ("forms",), "hyper mode takes exactly one Gram matrix")
        return HyperFamily(members[0].gram)
    if not members:
        _fail(path + ("forms",), "a family needs at least one form")
    labels = d.get("labels")
    if labels is not None and (not isinstance(labels, list) or len(labels) != len(members)):
        _fail(path + ("labels",), "expected one label per form")
    return FormFamily(members, labels)


def loads_family(text, source="<input>"):
    return parse_text(text, family_from_dict, source)


def load_family(path):
    return loads_family(_read(path), path)


# verdicts --------------------------------------------------------------------

def certificate_to_dict(c):
    F = c.field
    d = {
        "schema": SCHEMA,
        "verdict": "certificate",
        "field": F.to_dict(),
        "basis": matrix_to_json(c.basis),
        "diagonals": [values_to_json(row) for row in c.diagonals],
        "roots": [{"values": values_to_json(rd.values),
                   "basis": basis_to_json(F, rd.space.basis, rd.space.ambient)}
                  for rd in c.roots],
        "scalars": [values_to_json(row) for row in c.scalars],
        "radical_tail": c.radical_tail,
        "base_index": c.base_index,
    }
    if c.combination is not None:
        d["combination"] = values_to_json(c.combination)
    return d


def _require(d, key, path, kind):
    if key not in d:
        _fail(path, f"missing key {key!r}")
    if not isinstance(d[key], kind):
        _fail(path + (key,), f"expected {kind.__name__}")
    return d[key]


def _values(F, items, path):
    if not isinstance(items, list):
        _fail(path, "expected a list of scalars")
    return [FieldValue(F, _scalar(F, x, path + (j,))) for j, x in enumerate(items)]


def certificate_from_dict(d, path=()):
    if not isinstance(d, dict):
        _fail(path, "expected a JSON object")
    if d.get("schema") != SCHEMA:
        _fail(path + ("schema",), f"expected {SCHEMA}")
    if d.get("verdict", "certificate") != "certificate":
        _fail(path + ("verdict",), "not a certificate")
    F = _field(d, path)
    basis = matrix_from_json(F, _require(d, "basis", path, list), path + ("basis",))
    n = basis.nrows
    diagonals = [_values(F, row, path + ("diagonals", i))
                 for i, row in enumerate(_require(d, "diagonals", path, list))]
    roots = []
    for a, r in enumerate(_require(d, "roots", path, list)):
        rp = path + ("roots", a)
        if not isinstance(r, dict):
            _fail(rp, "expected an object")
        vals = tuple(_values(F, _require(r, "values", rp, list), rp + ("values",)))
        m = matrix_from_json(F, _require(r, "basis", rp, list), rp + ("basis",), n)
        roots.append(RootDatum(vals, Subspace.span(F, n, m.columns())))
    scalars = [_values(F, row, path + ("scalars", i))
               for i, row in enumerate(_require(d, "scalars", path, list))]
    tail = _require(d, "radical_tail", path, int)
    base_index = d.get("base_index")
    if base_index is not None and (not isinstance(base_index, int) or isinstance(base_index, bool)):
        _fail(path + ("base_index",), "expected an integer or null")
    combination = d.get("combination")
    if combination is not None:
        combination = _values(F, combination, path + ("combination",))
    return OrthoCertificate(F, basis, diagonals, roots, scalars, tail, base_index, combination)


def loads_certificate(text, source="<input>"):
    return parse_text(text, certificate_from_dict, source)


def load_certificate(path):
    return loads_certificate(_read(path), path)


def to_jsonable(x):
    """Witness payloads (values, subspaces, matrices, nested containers) as JSON."""
    if isinstance(x, FieldValue):
        return str(x)
    if isinstance(x, Subspace):
        return subspace_to_json(x)
    if isinstance(x, Matrix):
        return matrix_to_json(x)
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    if x is None or isinstance(x, (bool, int, str)):
        return x
    return str(x)


def verdict_to_dict(result, field=None):
    if isinstance(result, OrthoCertificate):
        return certificate_to_dict(result)
    if isinstance(result, (Disproof, Indeterminate)):
        payload = result.witness if isinstance(result, Disproof) else result.detail
        d = {"schema": SCHEMA, "verdict": result.verdict, "reason": result.reason,
             "witness" if isinstance(result, Disproof) else "detail": to_jsonable(payload)}
        if field is not None:
            d["field"] = field.to_dict()
        return d
    raise TypeError(f"not a verdict: {type(result).__name__}")
