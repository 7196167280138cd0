"""Problem interchange: SDPA sparse (.dat-s) and a dense JSON schema.

SDPA mapping (exact, no rescaling)::

    SDPA dual    max  F0 . Y   s.t.  Fi . Y = c_i,  Y psd
    here         min  C . X    s.t.  Ai . X = b_i,  X psd

so ``X = Y``, ``C = -F0``, ``A_i = F_i`` and ``b = c``.  Multi-block files are
embedded block-diagonally; a negative block size ``-k`` is a diagonal block
of order ``k``.  Only the upper triangle is read, entry ``(i, j)`` also sets
``(j, i)``.  The writer emits a single dense block with the upper triangle of
every nonzero entry, values as ``%.17g`` so that parsing restores them bit
for bit.
"""

from __future__ import annotations

import json
import re
import warnings
from typing import List, Union

import numpy as np

from .errors import IoError, ParseError
from .model import SdpProblem

_SEPARATORS = re.compile(r"[,{}()]")


def _lines(text: Union[bytes, str]):
    if isinstance(text, bytes):
        text = text.decode("utf-8", errors="replace")
    for lineno, raw in enumerate(text.splitlines(), start=1):
        s = raw.strip()
        if not s or s[0] in "\"*":
            continue
        toks = _SEPARATORS.sub(" ", s).split()
        if toks:
            yield lineno, toks


def _int(tok: str, lineno: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        try:
            f = float(tok)
        except ValueError:
            raise ParseError(f"{what}: expected an integer, got {tok!r}", lineno) from None
        if f != int(f):
            raise ParseError(f"{what}: expected an integer, got {tok!r}", lineno)
        return int(f)


def _float(tok: str, lineno: int, what: str) -> float:
    try:
        return float(tok)
    except ValueError:
        raise ParseError(f"{what}: expected a number, got {tok!r}", lineno) from None


def parse_sdpa(text: Union[bytes, str], name: str = "") -> SdpProblem:
    """Parse SDPA sparse format into an ``SdpProblem``."""
    it = _lines(text)

    def need(what):
        try:
            return next(it)
        except StopIteration:
            raise ParseError(f"unexpected end of input while reading {what}") from None

    lineno, toks = need("m")
    m = _int(toks[0], lineno, "m")
    if m < 1:
        raise ParseError("m must be positive", lineno)
    lineno, toks = need("number of blocks")
    nblocks = _int(toks[0], lineno, "number of blocks")
    if nblocks < 1:
        raise ParseError("number of blocks must be positive", lineno)

    sizes: List[int] = []
    while len(sizes) < nblocks:
        lineno, toks = need("block sizes")
        sizes.extend(_int(t, lineno, "block size") for t in toks)
    if len(sizes) != nblocks or 0 in sizes:
        raise ParseError(f"expected {nblocks} nonzero block sizes, got {sizes}", lineno)

    c: List[float] = []
    while len(c) < m:
        lineno, toks = need("objective vector")
        c.extend(_float(t, lineno, "objective vector") for t in toks)
    if len(c) != m:
        raise ParseError(f"objective vector has {len(c)} entries, expected {m}", lineno)

    dims = [abs(s) for s in sizes]
    offsets = np.concatenate([[0], np.cumsum(dims)])
    n = int(offsets[-1])
    F = np.zeros((m + 1, n, n))
    seen = {}
    for lineno, toks in it:
        if len(toks) != 5:
            raise ParseError(f"expected 5 fields (matno blkno i j value), got {len(toks)}", lineno)
        k = _int(toks[0], lineno, "matrix number")
        blk = _int(toks[1], lineno, "block number")
        i = _int(toks[2], lineno, "row")
        j = _int(toks[3], lineno, "column")
        v = _float(toks[4], lineno, "value")
        if not 0 <= k <= m:
            raise ParseError(f"matrix number {k} outside 0..{m}", lineno)
        if not 1 <= blk <= nblocks:
            raise ParseError(f"block number {blk} outside 1..{nblocks}", lineno)
        d = dims[blk - 1]
        if not (1 <= i <= d and 1 <= j <= d):
            raise ParseError(f"index ({i}, {j}) outside block {blk} of order {d}", lineno)
        if sizes[blk - 1] < 0 and i != j:
            raise ParseError(f"off-diagonal entry ({i}, {j}) in diagonal block {blk}", lineno)
        i, j = min(i, j), max(i, j)
        key = (k, blk, i, j)
        if key in seen:
            warnings.warn(f"line {lineno}: duplicate entry {key} overrides line {seen[key]}",
                          stacklevel=2)
        seen[key] = lineno
        r, s = offsets[blk - 1] + i - 1, offsets[blk - 1] + j - 1
        F[k, r, s] = F[k, s, r] = v
    return SdpProblem(-F[0], tuple(F[1:]), np.array(c), name=name)


def _g(x: float) -> str:
    return format(float(x), ".17g")


def format_sdpa(p: SdpProblem) -> str:
    """Single-block SDPA sparse text for ``p``."""
    out = [f'"{p.name}"' if p.name else '"sdplab problem"', str(p.m), "1", str(p.n),
           " ".join(_g(v) for v in p.b)]
    mats = [-p.C] + list(p.A)
    for k, M in enumerate(mats):
        for i in range(p.n):
            for j in range(i, p.n):
                if M[i, j] != 0:
                    out.append(f"{k} 1 {i + 1} {j + 1} {_g(M[i, j])}")
    return "\n".join(out) + "\n"


def problem_to_dict(p: SdpProblem) -> dict:
    return {"n": p.n, "m": p.m, "C": p.C.tolist(), "A": [Ai.tolist() for Ai in p.A],
            "b": p.b.tolist(), **({"name": p.name} if p.name else {})}


def problem_to_json(p: SdpProblem) -> str:
    # json uses the shortest repr that round-trips, so values come back bit-exact
    return json.dumps(problem_to_dict(p), indent=1)


def problem_from_json(text: Union[bytes, str], name: str = "") -> SdpProblem:
    try:
        d = json.loads(text)
    except ValueError as exc:
        raise ParseError(f"invalid JSON: {exc}", getattr(exc, "lineno", None)) from None
    if not isinstance(d, dict):
        raise ParseError("top level must be an object")
    missing = [k for k in ("C", "A", "b") if k not in d]
    if missing:
        raise ParseError(f"missing fields {missing}")
    try:
        C = np.array(d["C"], dtype=float)
        A = tuple(np.array(Ai, dtype=float) for Ai in d["A"])
        b = np.array(d["b"], dtype=float)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"bad numeric data: {exc}") from None
    if C.ndim != 2 or C.shape[0] != C.shape[1]:
        raise ParseError(f"C must be square, got shape {C.shape}")
    for key, val in (("n", C.shape[0]), ("m", len(A))):
        if key in d and d[key] != val:
            raise ParseError(f"declared {key}={d[key]} but data has {val}")
    if any(Ai.shape != C.shape for Ai in A):
        raise ParseError("every A_i must have the shape of C")
    if not np.allclose(C, C.T, rtol=0, atol=0) or any(not np.array_equal(Ai, Ai.T) for Ai in A):
        raise ParseError("C and A_i must be symmetric")
    try:
        return SdpProblem(C, A, b, name=d.get("name", name))
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def read_problem(path: str) -> SdpProblem:
    """Load ``.json`` or SDPA sparse from disk, sniffing the content."""
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc.strerror}") from None
    if data.lstrip()[:1] == b"{":
        return problem_from_json(data, name=path)
    return parse_sdpa(data, name=path)
