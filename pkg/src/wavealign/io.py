"""FASTA ingestion, substitution-matrix parsing, and output writers."""
from __future__ import annotations

import logging

from .errors import (
    EmptyFile,
    NoRecords,
    NonInteger,
    RaggedRow,
    UnknownSymbol,
)
from .model import (
    Alphabet,
    AlignmentPath,
    AlignmentSummary,
    Op,
    Sequence,
    path_to_cigar,
)

logger = logging.getLogger(__name__)

PAIR_WIDTH = 60


def parse_fasta(data: bytes, alphabet: Alphabet) -> list[Sequence]:
    """Parse FASTA bytes: '>' headers start records, residue lines are
    concatenated with whitespace ignored and case folded to upper."""
    text = data.decode("ascii", errors="replace")
    if not text.strip():
        raise EmptyFile("no FASTA content")
    records: list[tuple[str, list[str]]] = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith(">"):
            header = line[1:].strip()
            seq_id = header.split()[0] if header else ""
            records.append((seq_id, []))
        else:
            if not records:
                raise NoRecords("residues before the first '>' header")
            records[-1][1].append("".join(line.split()))
    if not records:
        raise NoRecords("no '>' header found")
    return [
        Sequence.make(seq_id, "".join(chunks), alphabet)
        for seq_id, chunks in records
    ]


def write_fasta(seq: Sequence, width: int = 60) -> bytes:
    lines = [f">{seq.id}"]
    for k in range(0, len(seq.residues), width):
        lines.append(seq.residues[k:k + width])
    return ("\n".join(lines) + "\n").encode("ascii")


def parse_matrix(data: bytes) -> tuple[str, dict[tuple[str, str], int]]:
    """Parse an NCBI-style square substitution matrix.

    The first non-comment line lists the column symbols; each following
    line is a row symbol plus one integer per column. '#' lines are
    comments. Asymmetry is tolerated but logged.
    """
    text = data.decode("ascii", errors="replace")
    symbols: list[str] = []
    table: dict[tuple[str, str], int] = {}
    for line in text.splitlines():
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        tokens = stripped.split()
        if not symbols:
            for tok in tokens:
                if len(tok) != 1:
                    raise UnknownSymbol(
                        f"column header entry {tok!r} is not a single symbol"
                    )
            symbols = [t.upper() for t in tokens]
            continue
        row_sym = tokens[0].upper()
        if len(tokens[0]) != 1 or row_sym not in symbols:
            raise UnknownSymbol(f"row symbol {tokens[0]!r} not in column set")
        if len(tokens) - 1 != len(symbols):
            raise RaggedRow(
                f"row {row_sym!r} has {len(tokens) - 1} entries, "
                f"expected {len(symbols)}"
            )
        for col_sym, tok in zip(symbols, tokens[1:]):
            try:
                table[(row_sym, col_sym)] = int(tok)
            except ValueError:
                raise NonInteger(
                    f"entry {tok!r} in row {row_sym!r} is not an integer"
                ) from None
    if not symbols:
        raise EmptyFile("no matrix content")
    asym = [
        (a, b) for (a, b) in table
        if (b, a) in table and table[(a, b)] != table[(b, a)]
    ]
    if asym:
        a, b = asym[0]
        logger.warning(
            "substitution matrix is not symmetric (first pair: %s/%s)", a, b
        )
    return "".join(symbols), table


def write_output(
    summary: AlignmentSummary,
    path: AlignmentPath,
    fmt: str,
    seq1: Sequence,
    seq2: Sequence,
) -> bytes:
    """Render a result in one of the three formats.

    stat   three lines: score, target range, query range (1-based inclusive)
    cigar  one line: 0-based start coordinates plus the extended CIGAR
    pair   pairwise text blocks of 60 columns
    """
    if fmt == "stat":
        out = (
            f"score: {summary.score}\n"
            f"target: {summary.start.i + 1}..{summary.end.i} {seq1.id}\n"
            f"query: {summary.start.j + 1}..{summary.end.j} {seq2.id}\n"
        )
        return out.encode("ascii")
    if fmt == "cigar":
        line = f"{summary.start.i} {summary.start.j} {path_to_cigar(path)}"
        return (line.rstrip() + "\n").encode("ascii")
    if fmt == "pair":
        return _pair_text(summary, path, seq1, seq2).encode("ascii")
    raise ValueError(f"unknown output format {fmt!r}")


def _pair_text(summary, path, seq1, seq2) -> str:
    t_row: list[str] = []
    m_row: list[str] = []
    q_row: list[str] = []
    i, j = summary.start
    for op in path.ops.tolist():
        if op <= Op.MISMATCH:
            t_row.append(seq1.residues[i])
            q_row.append(seq2.residues[j])
            m_row.append("|" if op == Op.MATCH else ".")
            i += 1
            j += 1
        elif op == Op.INSERT:
            t_row.append("-")
            q_row.append(seq2.residues[j])
            m_row.append(" ")
            j += 1
        else:
            t_row.append(seq1.residues[i])
            q_row.append("-")
            m_row.append(" ")
            i += 1

    lines = []
    ti, qj = summary.start
    for k in range(0, len(t_row), PAIR_WIDTH):
        tseg = "".join(t_row[k:k + PAIR_WIDTH])
        mseg = "".join(m_row[k:k + PAIR_WIDTH])
        qseg = "".join(q_row[k:k + PAIR_WIDTH])
        t_consumed = sum(1 for c in tseg if c != "-")
        q_consumed = sum(1 for c in qseg if c != "-")
        lines.append(f"{'target':<6} {ti + 1:>9} {tseg} {ti + t_consumed}")
        lines.append(f"{'':<16} {mseg}".rstrip())
        lines.append(f"{'query':<6} {qj + 1:>9} {qseg} {qj + q_consumed}")
        lines.append("")
        ti += t_consumed
        qj += q_consumed
    return "\n".join(lines) + ("\n" if lines else "")
