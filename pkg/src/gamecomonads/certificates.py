"""Certificate files: serialization, parsing, and audit-only verification.

Every certificate re-verifies against the input structures using only the
audit primitives (homomorphism checks, coalgebra law checks, partial-map
audits); no decision procedure is re-run.  Files are line-oriented with a
small header:

    certificate <kind>
    game <ef|pebble|modal>      (when applicable)
    k <K>
    claim <true|false>          (or: kappa <n>)
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from . import ef as ef_mod
from . import equivalence as eq_mod
from . import modal as modal_mod
from . import parameters as par_mod
from . import pebbling as pebble_mod
from .errors import CertificateError, ToolkitError
from .structures import Structure, check_hom, gaifman

_PAIR_RE = re.compile(r"\(([^()↦:]+)↦([^()↦:]+)\)")
_TRIPLE_RE = re.compile(r"\((\d+):([^()↦:]+)↦([^()↦:]+)\)")


def fmt_play(s: tuple) -> str:
    return "[" + ",".join(str(x) for x in s) + "]"


def parse_play(tok: str) -> tuple:
    if not (tok.startswith("[") and tok.endswith("]")):
        raise CertificateError(f"malformed play token {tok!r}")
    inner = tok[1:-1]
    return tuple(inner.split(",")) if inner else ()


def fmt_pairs(pairs, a: Structure, b: Structure) -> str:
    items = sorted(pairs, key=lambda xy: (a.index[xy[0]], b.index[xy[1]]))
    return "".join(f"({x}↦{y})" for x, y in items) or "-"


def parse_pairs(tok: str) -> frozenset:
    if tok == "-":
        return frozenset()
    found = _PAIR_RE.findall(tok)
    if not found:
        raise CertificateError(f"malformed pair token {tok!r}")
    return frozenset(found)


def fmt_triples(pos, a: Structure, b: Structure) -> str:
    items = sorted(pos, key=lambda t: t[0])
    return "".join(f"({i}:{x}↦{y})" for i, x, y in items) or "-"


def parse_triples(tok: str) -> frozenset:
    if tok == "-":
        return frozenset()
    found = _TRIPLE_RE.findall(tok)
    if not found:
        raise CertificateError(f"malformed placement token {tok!r}")
    return frozenset((int(i), x, y) for i, x, y in found)


@dataclass
class Certificate:
    kind: str
    game: Optional[str] = None
    k: Optional[int] = None
    claim: Optional[str] = None  # "true" | "false"
    kappa: Optional[int] = None
    body: list[list[str]] = field(default_factory=list)  # token rows


def format_certificate(cert: Certificate) -> str:
    lines = [f"certificate {cert.kind}"]
    if cert.game is not None:
        lines.append(f"game {cert.game}")
    if cert.k is not None:
        lines.append(f"k {cert.k}")
    if cert.claim is not None:
        lines.append(f"claim {cert.claim}")
    if cert.kappa is not None:
        lines.append(f"kappa {cert.kappa}")
    for row in cert.body:
        lines.append(" ".join(str(t) for t in row))
    return "\n".join(lines) + "\n"


def parse_certificate(text: str) -> Certificate:
    rows = []
    kind = game = claim = None
    k = kappa = None
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        head = toks[0]
        if head == "certificate":
            kind = toks[1]
        elif head == "game":
            game = toks[1]
        elif head == "k":
            k = int(toks[1])
        elif head == "claim":
            claim = toks[1]
        elif head == "kappa":
            kappa = int(toks[1])
        else:
            rows.append(toks)
    if kind is None:
        raise CertificateError("missing `certificate <kind>` header")
    return Certificate(kind, game, k, claim, kappa, rows)


# ---------------------------------------------------------------------------
# Emitters: in-memory results -> Certificate


def cert_table(kind: str, game: str, k: int, table: dict) -> Certificate:
    rows = [["map", fmt_play(s), "->", str(table[s])] for s in sorted(table, key=_play_key)]
    return Certificate(kind, game, k, "true", body=rows)


def _play_key(s: tuple):
    return (len(s), tuple(str(x) for x in s))


def cert_ef_spoiler(node: ef_mod.SpoilerNode, k: int) -> Certificate:
    rows: list[list[str]] = []
    counter = [0]

    def emit(nd: ef_mod.SpoilerNode) -> int:
        my = counter[0]
        counter[0] += 1
        rows.append(["node", str(my), "move", str(nd.move)])
        for reply, child in nd.branches:
            cid = "lose" if child is None else str(emit(child))
            rows.append(["branch", str(my), str(reply), cid])
        return my

    emit(node)
    rows.sort(key=lambda r: (int(r[1]), r[0] == "branch"))
    return Certificate("ef-spoiler", "ef", k, "false", body=rows)


def cert_modal_spoiler(node: modal_mod.ModalSpoilerNode, k: int) -> Certificate:
    rows: list[list[str]] = []
    counter = [0]

    def emit(nd: modal_mod.ModalSpoilerNode) -> int:
        my = counter[0]
        counter[0] += 1
        if nd.fail is not None:
            rows.append(["node", str(my), "fail", nd.fail])
            return my
        rows.append(["node", str(my), "move", nd.label, str(nd.move)])
        for reply, child in nd.branches:
            rows.append(["branch", str(my), str(reply), str(emit(child))])
        return my

    emit(node)
    rows.sort(key=lambda r: (int(r[1]), r[0] == "branch"))
    return Certificate("modal-spoiler", "modal", k, "false", body=rows)


def cert_pebble_family(fam: pebble_mod.StrategyFamily, a: Structure, b: Structure) -> Certificate:
    parts = sorted(fam.parts, key=lambda p: (len(p), fmt_pairs(p, a, b)))
    rows = []
    for p in parts:
        items = sorted(p, key=lambda xy: (a.index[xy[0]], b.index[xy[1]]))
        rows.append(["part"] + [f"({x}↦{y})" for x, y in items])
    return Certificate("pebble-family", "pebble", fam.k, "true", body=rows)


def cert_pebble_refutation(node: pebble_mod.SpoilerPosition, k: int,
                           a: Structure, b: Structure) -> Certificate:
    rows: list[list[str]] = []
    counter = [0]

    def emit(nd: pebble_mod.SpoilerPosition) -> int:
        my = counter[0]
        counter[0] += 1
        pos = fmt_pairs(nd.pos, a, b)
        if nd.drop is not None:
            rows.append(["node", str(my), pos, "drop", str(nd.drop[0])])
            rows.append(["child", str(my), str(emit(nd.child))])
        else:
            rows.append(["node", str(my), pos, "place", str(nd.place)])
            for reply, child in nd.branches:
                cid = "lose" if child is None else str(emit(child))
                rows.append(["branch", str(my), str(reply), cid])
        return my

    emit(node)
    rows.sort(key=lambda r: (int(r[1]), r[0] != "node"))
    return Certificate("pebble-refutation", "pebble", k, "false", body=rows)


def cert_bf_duplicator(entries: dict, k: int, game: str) -> Certificate:
    rows = []
    for (s, t) in sorted(entries, key=lambda st: (_play_key(st[0]), _play_key(st[1]))):
        here = entries[(s, t)]
        for (side, mover) in sorted(here, key=lambda sm: (sm[0], _play_key(sm[1]))):
            rows.append(["respond", fmt_play(s), fmt_play(t), side,
                         fmt_play(mover), "->", fmt_play(here[(side, mover)])])
    return Certificate("bf-duplicator", game, k, "true", body=rows)


def cert_bf_spoiler(node: eq_mod.SpoilerBFNode, k: int, game: str) -> Certificate:
    rows: list[list[str]] = []
    counter = [0]

    def emit(nd: eq_mod.SpoilerBFNode) -> int:
        my = counter[0]
        counter[0] += 1
        if nd.side is None:
            rows.append(["node", str(my), "stall"])
            return my
        rows.append(["node", str(my), "side", nd.side, "move", fmt_play(nd.move)])
        for reply, child in nd.branches:
            cid = "fail" if child is None else str(emit(child))
            rows.append(["branch", str(my), fmt_play(reply), cid])
        return my

    emit(node)
    rows.sort(key=lambda r: (int(r[1]), r[0] == "branch"))
    return Certificate("bf-spoiler", game, k, "false", body=rows)


def cert_pebble_safe(safe: frozenset, k: int, a: Structure, b: Structure) -> Certificate:
    rows = [["pos", fmt_triples(pos, a, b)]
            for pos in sorted(safe, key=lambda p: (len(p), fmt_triples(p, a, b)))]
    return Certificate("pebble-safe", "pebble", k, "true", body=rows)


def cert_pebble_bf_spoiler(node: eq_mod.PebbleBFNode, k: int,
                           a: Structure, b: Structure) -> Certificate:
    rows: list[list[str]] = []
    counter = [0]

    def emit(nd: eq_mod.PebbleBFNode) -> int:
        my = counter[0]
        counter[0] += 1
        rows.append(["node", str(my), fmt_triples(nd.pos, a, b), "pebble", str(nd.index),
                     "side", nd.side, "elem", str(nd.elem)])
        for reply, child in nd.branches:
            cid = "lose" if child is None else str(emit(child))
            rows.append(["branch", str(my), str(reply), cid])
        return my

    emit(node)
    rows.sort(key=lambda r: (int(r[1]), r[0] == "branch"))
    return Certificate("pebble-bf-spoiler", "pebble", k, "false", body=rows)


def cert_iso(forward: dict, backward: dict, k: int, game: str) -> Certificate:
    rows = [["fwd", fmt_play(s), "->", str(forward[s])]
            for s in sorted(forward, key=_play_key)]
    rows += [["bwd", fmt_play(t), "->", str(backward[t])]
             for t in sorted(backward, key=_play_key)]
    return Certificate("kleisli-iso", game, k, "true", body=rows)


def cert_forest_cover(res: par_mod.KappaResult) -> Certificate:
    cover = res.cover
    rows = [["parent", str(v), str(cover.parent[v])]
            for v in cover.vertices if cover.parent[v] is not None]
    return Certificate("forest-cover", "ef", res.kappa, kappa=res.kappa, body=rows)


def cert_pebble_forest_cover(res: par_mod.KappaResult) -> Certificate:
    pfc = res.pfc
    rows = [["parent", str(v), str(pfc.cover.parent[v])]
            for v in pfc.cover.vertices if pfc.cover.parent[v] is not None]
    rows += [["pebble", str(v), str(pfc.pebbles[v])] for v in pfc.cover.vertices]
    if pfc.cover.vertices:
        td = par_mod.pfc_to_tree_decomposition(pfc)
        for x in td.nodes:
            rows.append(["bag", str(x)] + [str(v) for v in sorted(td.bags[x], key=str)])
        for x in td.nodes:
            if td.parent[x] is not None:
                rows.append(["edge", str(td.parent[x]), str(x)])
    return Certificate("pebble-forest-cover", "pebble", res.kappa, kappa=res.kappa, body=rows)


def cert_modal_coalgebra(res: par_mod.KappaResult) -> Certificate:
    rows = [["map", str(v), "->", fmt_play(res.coalgebra.alpha[v])]
            for v in res.coalgebra.host.universe]
    return Certificate("modal-coalgebra", "modal", res.kappa, kappa=res.kappa, body=rows)


def cert_hom(mapping: dict, a: Structure) -> Certificate:
    rows = [["map", str(e), "->", str(mapping[e])] for e in a.universe]
    return Certificate("hom-witness", claim="true", body=rows)


def cert_both(game: str, k: int, fwd: Optional[Certificate], bwd: Optional[Certificate],
              failing: Optional[str] = None) -> Certificate:
    if failing is None:
        rows = [["fwd"] + row for row in fwd.body] + [["bwd"] + row for row in bwd.body]
        return Certificate("both-pair", game, k, "true", body=rows)
    inner = fwd if failing == "fwd" else bwd
    rows = [["direction", failing]] + [[failing] + row for row in inner.body]
    return Certificate("both-pair", game, k, "false", body=rows)


# ---------------------------------------------------------------------------
# Parsing bodies back into auditable objects


def _rows_by_node(rows):
    nodes: dict[int, list[str]] = {}
    branches: dict[int, list[list[str]]] = {}
    children: dict[int, int] = {}
    for row in rows:
        if row[0] == "node":
            nodes[int(row[1])] = row[2:]
        elif row[0] == "branch":
            branches.setdefault(int(row[1]), []).append(row[2:])
        elif row[0] == "child":
            children[int(row[1])] = int(row[2])
        else:
            raise CertificateError(f"unexpected row {row!r}")
    return nodes, branches, children


def _build_ef_spoiler(rows) -> ef_mod.SpoilerNode:
    nodes, branches, _ = _rows_by_node(rows)

    def build(i: int, seen: frozenset) -> ef_mod.SpoilerNode:
        if i in seen:
            raise CertificateError("cycle in spoiler tree")
        spec = nodes.get(i)
        if spec is None or spec[0] != "move":
            raise CertificateError(f"bad node {i}")
        brs = []
        for row in branches.get(i, []):
            reply, cid = row[0], row[1]
            child = None if cid == "lose" else build(int(cid), seen | {i})
            brs.append((reply, child))
        return ef_mod.SpoilerNode(spec[1], tuple(brs))

    return build(0, frozenset())


def _build_modal_spoiler(rows) -> modal_mod.ModalSpoilerNode:
    nodes, branches, _ = _rows_by_node(rows)

    def build(i: int, seen: frozenset) -> modal_mod.ModalSpoilerNode:
        if i in seen:
            raise CertificateError("cycle in spoiler tree")
        spec = nodes.get(i)
        if spec is None:
            raise CertificateError(f"bad node {i}")
        if spec[0] == "fail":
            return modal_mod.ModalSpoilerNode(fail=spec[1])
        brs = tuple((row[0], build(int(row[1]), seen | {i}))
                    for row in branches.get(i, []))
        return modal_mod.ModalSpoilerNode(label=spec[1], move=spec[2], branches=brs)

    return build(0, frozenset())


def _build_pebble_refutation(rows) -> pebble_mod.SpoilerPosition:
    nodes, branches, children = _rows_by_node(rows)

    def build(i: int, seen: frozenset) -> pebble_mod.SpoilerPosition:
        if i in seen:
            raise CertificateError("cycle in refutation")
        spec = nodes.get(i)
        if spec is None:
            raise CertificateError(f"bad node {i}")
        pos = parse_pairs(spec[0])
        if spec[1] == "drop":
            src = spec[2]
            pair = next((p for p in pos if p[0] == src), None)
            if pair is None or i not in children:
                raise CertificateError(f"bad drop node {i}")
            return pebble_mod.SpoilerPosition(pos, drop=pair,
                                              child=build(children[i], seen | {i}))
        if spec[1] != "place":
            raise CertificateError(f"bad node {i}")
        brs = []
        for row in branches.get(i, []):
            reply, cid = row[0], row[1]
            child = None if cid == "lose" else build(int(cid), seen | {i})
            brs.append((reply, child))
        return pebble_mod.SpoilerPosition(pos, place=spec[2], branches=tuple(brs))

    return build(0, frozenset())


def _build_bf_spoiler(rows) -> eq_mod.SpoilerBFNode:
    nodes, branches, _ = _rows_by_node(rows)

    def build(i: int, seen: frozenset) -> eq_mod.SpoilerBFNode:
        if i in seen:
            raise CertificateError("cycle in spoiler tree")
        spec = nodes.get(i)
        if spec is None:
            raise CertificateError(f"bad node {i}")
        if spec[0] == "stall":
            return eq_mod.SpoilerBFNode(None, None)
        if spec[0] != "side" or spec[2] != "move":
            raise CertificateError(f"bad node {i}")
        brs = []
        for row in branches.get(i, []):
            reply, cid = parse_play(row[0]), row[1]
            child = None if cid == "fail" else build(int(cid), seen | {i})
            brs.append((reply, child))
        return eq_mod.SpoilerBFNode(spec[1], parse_play(spec[3]), tuple(brs))

    return build(0, frozenset())


def _build_pebble_bf_spoiler(rows) -> eq_mod.PebbleBFNode:
    nodes, branches, _ = _rows_by_node(rows)

    def build(i: int, seen: frozenset) -> eq_mod.PebbleBFNode:
        if i in seen:
            raise CertificateError("cycle in refutation")
        spec = nodes.get(i)
        if spec is None or spec[1] != "pebble" or spec[3] != "side" or spec[5] != "elem":
            raise CertificateError(f"bad node {i}")
        brs = []
        for row in branches.get(i, []):
            reply, cid = row[0], row[1]
            child = None if cid == "lose" else build(int(cid), seen | {i})
            brs.append((reply, child))
        return eq_mod.PebbleBFNode(parse_triples(spec[0]), int(spec[2]), spec[4],
                                   spec[6], tuple(brs))

    return build(0, frozenset())


def _parse_map_rows(rows, head: str, play_key: bool) -> dict:
    table = {}
    for row in rows:
        if row[0] != head or len(row) != 4 or row[2] != "->":
            raise CertificateError(f"expected `{head} <x> -> <y>` rows, got {row!r}")
        key = parse_play(row[1]) if play_key else row[1]
        table[key] = row[3]
    return table


# ---------------------------------------------------------------------------
# Verification dispatch


def verify_certificate(cert: Certificate, a: Structure,
                       b: Optional[Structure] = None) -> tuple[bool, str]:
    """Audit the certificate against the given structures.

    Returns (ok, reason).  Raises CertificateError on malformed input and
    ToolkitError when a required second structure is missing.
    """
    kind = cert.kind
    needs_b = kind in ("ef-table", "modal-table", "ef-spoiler", "modal-spoiler",
                       "pebble-family", "pebble-refutation", "bf-duplicator",
                       "bf-spoiler", "pebble-safe", "pebble-bf-spoiler",
                       "kleisli-iso", "hom-witness", "both-pair")
    if needs_b and b is None:
        raise ToolkitError(f"certificate kind {kind!r} needs two structures")

    if kind == "hom-witness":
        table = _parse_map_rows(cert.body, "map", play_key=False)
        try:
            return (check_hom(table, a, b), "homomorphism check")
        except ToolkitError as exc:
            return False, str(exc)
    if kind == "ef-table":
        table = _parse_map_rows(cert.body, "map", play_key=True)
        try:
            f = ef_mod.EfCoKleisli(cert.k, a, b, table)
        except ToolkitError as exc:
            return False, str(exc)
        return (f.is_homomorphism(), "coKleisli homomorphism check")
    if kind == "modal-table":
        table = _parse_map_rows(cert.body, "map", play_key=True)
        try:
            f = modal_mod.ModalCoKleisli(cert.k, a, b, table)
        except ToolkitError as exc:
            return False, str(exc)
        return (f.is_homomorphism(), "coKleisli homomorphism check")
    if kind == "ef-spoiler":
        return ef_mod.audit_spoiler_tree(_build_ef_spoiler(cert.body), a, b, cert.k)
    if kind == "modal-spoiler":
        return modal_mod.audit_modal_spoiler(_build_modal_spoiler(cert.body), a, b, cert.k)
    if kind == "pebble-family":
        parts = set()
        for row in cert.body:
            if row[0] != "part":
                raise CertificateError(f"expected part rows, got {row!r}")
            pairs = frozenset()
            for tok in row[1:]:
                pairs |= parse_pairs(tok)
            parts.add(pairs)
        fam = pebble_mod.StrategyFamily(cert.k, frozenset(parts))
        return pebble_mod.audit_strategy_family(fam, a, b)
    if kind == "pebble-refutation":
        return pebble_mod.audit_spoiler_positions(
            _build_pebble_refutation(cert.body), a, b, cert.k)
    if kind == "bf-duplicator":
        entries: dict = {}
        for row in cert.body:
            if row[0] != "respond" or len(row) != 7 or row[5] != "->":
                raise CertificateError(f"bad respond row {row!r}")
            pos = (parse_play(row[1]), parse_play(row[2]))
            entries.setdefault(pos, {})[(row[3], parse_play(row[4]))] = parse_play(row[6])
        return eq_mod.audit_bf_duplicator(entries, a, b, cert.k, cert.game)
    if kind == "bf-spoiler":
        return eq_mod.audit_bf_spoiler(_build_bf_spoiler(cert.body), a, b, cert.k, cert.game)
    if kind == "pebble-safe":
        safe = frozenset(parse_triples(row[1]) for row in cert.body)
        return eq_mod.audit_pebble_safe(safe, a, b, cert.k)
    if kind == "pebble-bf-spoiler":
        return eq_mod.audit_pebble_spoiler(_build_pebble_bf_spoiler(cert.body), a, b, cert.k)
    if kind == "kleisli-iso":
        fwd = _parse_map_rows([r for r in cert.body if r[0] == "fwd"], "fwd", True)
        bwd = _parse_map_rows([r for r in cert.body if r[0] == "bwd"], "bwd", True)
        return eq_mod.audit_iso_pair(fwd, bwd, a, b, cert.k, cert.game)
    if kind == "both-pair":
        return _verify_both(cert, a, b)
    if kind == "forest-cover":
        return _verify_forest_cover(cert, a)
    if kind == "pebble-forest-cover":
        return _verify_pfc(cert, a)
    if kind == "modal-coalgebra":
        alpha = {}
        for row in cert.body:
            if row[0] != "map" or len(row) != 4 or row[2] != "->":
                raise CertificateError(f"bad map row {row!r}")
            alpha[row[1]] = parse_play(row[3])
        c = par_mod.CoalgebraMap("modal", cert.kappa, a, alpha)
        ok, why = par_mod.check_coalgebra(c)
        return ok, (why or "coalgebra laws hold")
    raise CertificateError(f"unknown certificate kind {kind!r}")


def _verify_both(cert: Certificate, a: Structure, b: Structure) -> tuple[bool, str]:
    game, k = cert.game, cert.k
    if cert.claim == "true":
        fwd_rows = [row[1:] for row in cert.body if row[0] == "fwd"]
        bwd_rows = [row[1:] for row in cert.body if row[0] == "bwd"]
        true_kind = {"ef": "ef-table", "modal": "modal-table",
                     "pebble": "pebble-family"}[game]
        ok1, why1 = verify_certificate(
            Certificate(true_kind, game, k, "true", body=fwd_rows), a, b)
        if not ok1:
            return False, f"forward: {why1}"
        ok2, why2 = verify_certificate(
            Certificate(true_kind, game, k, "true", body=bwd_rows), b, a)
        return ok2, ("ok" if ok2 else f"backward: {why2}")
    direction = next((row[1] for row in cert.body if row[0] == "direction"), None)
    if direction not in ("fwd", "bwd"):
        raise CertificateError("both-pair false certificate needs a direction row")
    rows = [row[1:] for row in cert.body if row[0] == direction]
    false_kind = {"ef": "ef-spoiler", "modal": "modal-spoiler",
                  "pebble": "pebble-refutation"}[game]
    src, dst = (a, b) if direction == "fwd" else (b, a)
    return verify_certificate(Certificate(false_kind, game, k, "false", body=rows), src, dst)


def _verify_forest_cover(cert: Certificate, a: Structure) -> tuple[bool, str]:
    parent = {v: None for v in a.universe}
    for row in cert.body:
        if row[0] != "parent" or len(row) != 3:
            raise CertificateError(f"bad cover row {row!r}")
        parent[row[1]] = row[2]
    try:
        cover = par_mod.ForestCover(tuple(a.universe), parent)
        if cover.height() != cert.kappa:
            return False, f"cover height {cover.height()} != claimed {cert.kappa}"
        c = par_mod.forest_cover_to_coalgebra(cover, cert.kappa, a)
    except ToolkitError as exc:
        return False, str(exc)
    ok, why = par_mod.check_coalgebra(c)
    return ok, (why or "coalgebra laws hold")


def _verify_pfc(cert: Certificate, a: Structure) -> tuple[bool, str]:
    parent = {v: None for v in a.universe}
    pebbles: dict = {}
    bags: dict = {}
    td_parent: dict = {}
    for row in cert.body:
        if row[0] == "parent":
            parent[row[1]] = row[2]
        elif row[0] == "pebble":
            pebbles[row[1]] = int(row[2])
        elif row[0] == "bag":
            bags[row[1]] = frozenset(row[2:])
            td_parent.setdefault(row[1], None)
        elif row[0] == "edge":
            td_parent[row[2]] = row[1]
            td_parent.setdefault(row[1], None)
        else:
            raise CertificateError(f"bad cover row {row!r}")
    g = gaifman(a)
    try:
        cover = par_mod.ForestCover(tuple(a.universe), parent)
        pfc = par_mod.PebbleForestCover(cover, pebbles)
    except ToolkitError as exc:
        return False, str(exc)
    if not par_mod.is_pebble_forest_cover(pfc, g, cert.kappa):
        return False, "not a valid pebbled forest cover at the claimed pebble count"
    used = max(pfc.pebbles.values(), default=1)
    if used != cert.kappa:
        return False, f"pebbles used {used} != claimed {cert.kappa}"
    try:
        c = par_mod.pfc_to_pebble_coalgebra(pfc, cert.kappa, a)
    except ToolkitError as exc:
        return False, str(exc)
    ok, why = par_mod.check_coalgebra(c)
    if not ok:
        return False, why
    if bags:
        td = par_mod.TreeDecomposition(tuple(sorted(bags, key=str)), td_parent, bags)
        if not par_mod.is_tree_decomposition(td, g):
            return False, "attached tree decomposition is invalid"
        if td.width() > cert.kappa - 1:
            return False, f"decomposition width {td.width()} exceeds {cert.kappa - 1}"
    return True, "ok"
