"""Plain-text complex and cochain files.

Complex files hold one facet per line as whitespace-separated vertex
tokens; ``#`` starts a comment. When every token is an integer the tokens
are used as vertex ids, otherwise the distinct tokens are sorted and
numbered from 0 and kept as labels.

Cochain files start with ``group <spec>`` and then hold lines ``u v
<images>`` giving phi(u, v) as a permutation of {0..t-1}, written either as
separate tokens or comma-separated. Unlisted edges carry the identity.
"""
from __future__ import annotations

import re
from pathlib import Path

from .cochains import Cochain1
from .complex import SimplicialComplex
from .errors import MalformedInputError
from .groups import GroupAction, parse_group


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def parse_complex(text: str) -> SimplicialComplex:
    rows = [(lineno, line.split()) for lineno, line in _lines(text)]
    if not rows:
        raise MalformedInputError("complex file has no facets")
    tokens = {tok for _, toks in rows for tok in toks}
    numeric = all(re.fullmatch(r"\d+", tok) for tok in tokens)
    if numeric:
        ids = {tok: int(tok) for tok in tokens}
        labels = None
    else:
        ordered = sorted(tokens)
        ids = {tok: i for i, tok in enumerate(ordered)}
        labels = dict(enumerate(ordered))
    facets = []
    for lineno, toks in rows:
        if len(set(toks)) != len(toks):
            raise MalformedInputError(f"line {lineno}: repeated vertex")
        facets.append([ids[tok] for tok in toks])
    return SimplicialComplex.from_facets(facets, labels)


def read_complex(path) -> SimplicialComplex:
    return parse_complex(Path(path).read_text(encoding="utf-8"))


def format_complex(X: SimplicialComplex, use_labels: bool = False, header: str = "") -> str:
    out = [f"# {line}" for line in header.splitlines()]
    for facet in X.facets:
        if use_labels:
            out.append(" ".join(X.label(v) for v in facet))
        else:
            out.append(" ".join(str(v) for v in facet))
    return "\n".join(out) + "\n"


def write_complex(X: SimplicialComplex, path, use_labels: bool = False, header: str = ""):
    Path(path).write_text(format_complex(X, use_labels, header), encoding="utf-8")


def _vertex_lookup(X: SimplicialComplex):
    table = {str(v): v for v in X.vertices}
    if X.labels:
        table.update({name: v for v, name in X.labels.items()})
    return table


def parse_cochain(text: str, X: SimplicialComplex, group: GroupAction | None = None) -> Cochain1:
    """Read a cochain file against the complex ``X``.

    ``group`` overrides the header's group when given; the two must agree
    on the set size.
    """
    lines = list(_lines(text))
    if not lines or not lines[0][1].startswith("group"):
        raise MalformedInputError("cochain file must start with 'group <spec>'")
    spec = lines[0][1][len("group"):].strip()
    declared = parse_group(spec)
    if group is None:
        group = declared
    elif group.t != declared.t:
        raise MalformedInputError(f"group acts on {group.t} points, file declares {declared.t}")
    lookup = _vertex_lookup(X)
    values = {}
    for lineno, line in lines[1:]:
        toks = line.replace(",", " ").split()
        if len(toks) < 3:
            raise MalformedInputError(f"line {lineno}: expected 'u v <images>'")
        try:
            u, v = lookup[toks[0]], lookup[toks[1]]
        except KeyError as exc:
            raise MalformedInputError(f"line {lineno}: unknown vertex {exc.args[0]}") from None
        try:
            image = [int(x) for x in toks[2:]]
        except ValueError:
            raise MalformedInputError(f"line {lineno}: images must be integers") from None
        if len(image) != group.t:
            raise MalformedInputError(f"line {lineno}: expected {group.t} images")
        if (u, v) in values and values[(u, v)] != image:
            raise MalformedInputError(f"line {lineno}: edge {toks[0]} {toks[1]} listed twice")
        values[(u, v)] = image
    try:
        return Cochain1.from_dict(X, group, values)
    except KeyError as exc:
        raise MalformedInputError(f"not an edge of the complex: {exc}") from None


def read_cochain(path, X: SimplicialComplex, group: GroupAction | None = None) -> Cochain1:
    return parse_cochain(Path(path).read_text(encoding="utf-8"), X, group)


def format_cochain(phi: Cochain1, spec: str, use_labels: bool = False,
                   skip_identity: bool = True) -> str:
    G, X = phi.group, phi.complex
    name = X.label if use_labels else str
    out = [f"group {spec}"]
    for (u, v), g in phi.items():
        if skip_identity and g == G.identity:
            continue
        out.append(f"{name(u)} {name(v)} " + " ".join(map(str, G.elements[g])))
    return "\n".join(out) + "\n"


def write_cochain(phi: Cochain1, path, spec: str, use_labels: bool = False):
    Path(path).write_text(format_cochain(phi, spec, use_labels), encoding="utf-8")
