"""Graphviz DOT export for diagrams and monomials.

Output is built from the canonical form, so isomorphic inputs give
byte-identical text.  Edge ``taillabel``/``headlabel`` attributes record
the slot of each end in its vertex's cyclic order.
"""

from __future__ import annotations

from .diagram import ConnectedDiagram, Monomial


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(obj, name: str = "diagram") -> str:
    if isinstance(obj, ConnectedDiagram):
        factors = [obj]
    elif isinstance(obj, Monomial):
        factors = list(obj.factors)
    else:
        raise TypeError(f"cannot export {type(obj).__name__} to DOT")
    lines = [f"graph {_quote(name)} {{"]
    for i, f in enumerate(factors):
        prefix = f"c{i}v"
        for v, k in enumerate(f.kinds):
            if k is None:
                lines.append(f"  {prefix}{v} [shape=point];")
            else:
                lines.append(f"  {prefix}{v} [shape=plaintext, label={_quote(k)}];")
        for (a, i_a), (b, i_b) in f.edges:
            lines.append(f'  {prefix}{a} -- {prefix}{b} [taillabel="{i_a}", headlabel="{i_b}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
