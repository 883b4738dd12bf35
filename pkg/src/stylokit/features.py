"""The six feature families and the document-by-feature matrix.

Every extractor maps a Document to a plain Counter of feature names.
``build_matrix`` takes the sorted union of names over the corpus and
fills rows with relative frequencies. Denominators are per family: the
event total of the family itself (tokens, rhyme positions, affix
occurrences, n-gram windows), except for function words, whose counts
are divided by the document's lexical token total so that rarely-used
list words keep their corpus-level scale.
"""

from __future__ import annotations

import csv
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from .corpus import Corpus, Document
from .errors import AnalysisError


class FeatureKind(str, Enum):
    LEMMA = "lemma"
    RHYME_LEMMA = "rhyme"
    WORD_FORM = "form"
    AFFIX = "affix"
    POS_NGRAM = "pos"
    FUNCTION_WORD = "fw"


class Scale(str, Enum):
    RAW_COUNT = "raw_count"
    RELATIVE_FREQUENCY = "relative_frequency"
    ZSCORE = "zscore"
    TFSD = "tfsd"
    L2_NORMALIZED_ZSCORE = "l2_normalized_zscore"


@dataclass(frozen=True)
class FeatureSpec:
    kind: FeatureKind
    ngram_n: int = 3
    min_affix_word_len: int = 4
    function_words: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.ngram_n < 1:
            raise ValueError("ngram_n must be >= 1")
        if self.min_affix_word_len < 1:
            raise ValueError("min_affix_word_len must be >= 1")
        if self.kind is FeatureKind.FUNCTION_WORD and not self.function_words:
            raise ValueError("function-word extraction needs a non-empty word list")


def extract_lemmas(doc: Document) -> Counter[str]:
    return Counter(tok.lemma for tok in doc.lexical_tokens())


def extract_rhyme_lemmas(doc: Document) -> Counter[str]:
    """Count the lemma closing each verse; proper-name rhymes contribute nothing."""
    counts: Counter[str] = Counter()
    for verse in doc.verses:
        tok = verse.rhyme_token
        if not tok.is_proper_noun:
            counts[tok.lemma] += 1
    return counts


def extract_forms(doc: Document) -> Counter[str]:
    return Counter(tok.form for tok in doc.lexical_tokens())


def affixes_of(form: str, min_word_len: int = 4) -> list[str]:
    """Edge-anchored character 3-grams plus interword-space 2-grams.

    Words of at least ``min_word_len`` characters yield ``^xxx`` and
    ``xxx$``; every word yields ``_xx`` and ``xx_`` from whatever
    characters it has (a one-letter word degenerates to ``_x`` / ``x_``).
    """
    out = []
    if len(form) >= min_word_len:
        out.append("^" + form[:3])
        out.append(form[-3:] + "$")
    out.append("_" + form[:2])
    out.append(form[-2:] + "_")
    return out


def extract_affixes(doc: Document, min_word_len: int = 4) -> Counter[str]:
    counts: Counter[str] = Counter()
    for tok in doc.lexical_tokens():
        counts.update(affixes_of(tok.form, min_word_len))
    return counts


def extract_pos_ngrams(doc: Document, n: int = 3) -> Counter[str]:
    """Contiguous POS tag n-grams over the whole token stream.

    Verse boundaries do not break the window, and proper-name tokens stay
    in: their tag is part of the sequence signal.
    """
    tags = [tok.pos for tok in doc.tokens()]
    return Counter(
        ".".join(tags[i : i + n]) for i in range(len(tags) - n + 1)
    )


def extract_function_words(doc: Document, fw_list: tuple[str, ...]) -> Counter[str]:
    wanted = set(fw_list)
    counts: Counter[str] = Counter()
    for tok in doc.lexical_tokens():
        if tok.form in wanted:
            counts[tok.form] += 1
    return counts


def extract_counts(doc: Document, spec: FeatureSpec) -> Counter[str]:
    if spec.kind is FeatureKind.LEMMA:
        return extract_lemmas(doc)
    if spec.kind is FeatureKind.RHYME_LEMMA:
        return extract_rhyme_lemmas(doc)
    if spec.kind is FeatureKind.WORD_FORM:
        return extract_forms(doc)
    if spec.kind is FeatureKind.AFFIX:
        return extract_affixes(doc, spec.min_affix_word_len)
    if spec.kind is FeatureKind.POS_NGRAM:
        return extract_pos_ngrams(doc, spec.ngram_n)
    if spec.kind is FeatureKind.FUNCTION_WORD:
        return extract_function_words(doc, spec.function_words)
    raise ValueError(f"unknown feature kind: {spec.kind}")


def candidate_function_words(corpus: Corpus, top_k: int) -> list[tuple[str, int]]:
    """Most frequent surface forms corpus-wide, for manual curation.

    Returns at most ``top_k`` (form, count) pairs, count-descending with
    lexicographic tie-break, clamped to the vocabulary size.
    """
    if top_k < 1:
        raise ValueError("top_k must be >= 1")
    if len(corpus) == 0:
        raise AnalysisError("cannot rank forms of an empty corpus")
    totals: Counter[str] = Counter()
    for doc in corpus:
        totals.update(extract_forms(doc))
    ranked = sorted(totals.items(), key=lambda kv: (-kv[1], kv[0]))
    return ranked[:top_k]


@dataclass(frozen=True)
class FeatureMatrix:
    doc_ids: tuple[str, ...]
    feature_names: tuple[str, ...]
    values: np.ndarray
    scale: Scale
    kind: FeatureKind | None = None

    def __post_init__(self) -> None:
        if self.values.shape != (len(self.doc_ids), len(self.feature_names)):
            raise ValueError(
                f"value shape {self.values.shape} does not match "
                f"{len(self.doc_ids)} docs x {len(self.feature_names)} features"
            )
        if not np.all(np.isfinite(self.values)):
            raise ValueError("matrix values must be finite")

    @property
    def n_docs(self) -> int:
        return len(self.doc_ids)

    @property
    def n_features(self) -> int:
        return len(self.feature_names)

    def column(self, name: str) -> np.ndarray:
        return self.values[:, self.feature_names.index(name)]

    def subset(self, names: tuple[str, ...] | list[str]) -> "FeatureMatrix":
        """Restrict to the given features, keeping current column order."""
        keep = set(names)
        missing = keep - set(self.feature_names)
        if missing:
            raise AnalysisError(f"unknown features requested: {sorted(missing)}")
        idx = [i for i, n in enumerate(self.feature_names) if n in keep]
        return FeatureMatrix(
            doc_ids=self.doc_ids,
            feature_names=tuple(self.feature_names[i] for i in idx),
            values=self.values[:, idx].copy(),
            scale=self.scale,
            kind=self.kind,
        )

    def with_values(self, values: np.ndarray, scale: Scale) -> "FeatureMatrix":
        return FeatureMatrix(
            doc_ids=self.doc_ids,
            feature_names=self.feature_names,
            values=values,
            scale=scale,
            kind=self.kind,
        )


def build_matrix(corpus: Corpus, spec: FeatureSpec, raw_counts: bool = False) -> FeatureMatrix:
    """Assemble the corpus-wide matrix for one feature family.

    Columns are the lexicographically sorted union of feature names over
    all documents; rows default to relative frequencies. A document with
    no extractable features keeps an all-zero row.
    """
    if len(corpus) == 0:
        raise AnalysisError("cannot build a matrix from an empty corpus")
    per_doc = [extract_counts(doc, spec) for doc in corpus]
    names = sorted(set().union(*map(set, per_doc)))
    index = {name: j for j, name in enumerate(names)}

    values = np.zeros((len(corpus), len(names)), dtype=float)
    for i, counts in enumerate(per_doc):
        for name, count in counts.items():
            values[i, index[name]] = count

    if not raw_counts:
        if spec.kind is FeatureKind.FUNCTION_WORD:
            denoms = np.array([doc.lexical_token_count for doc in corpus], dtype=float)
        else:
            denoms = values.sum(axis=1)
        safe = np.where(denoms > 0, denoms, 1.0)
        values = values / safe[:, None]

    return FeatureMatrix(
        doc_ids=corpus.doc_ids,
        feature_names=tuple(names),
        values=values,
        scale=Scale.RAW_COUNT if raw_counts else Scale.RELATIVE_FREQUENCY,
        kind=spec.kind,
    )


def format_value(v: float) -> str:
    """Decimal with 12 significant digits, the fixed on-disk float format."""
    return format(float(v), ".12g")


def write_matrix_csv(matrix: FeatureMatrix, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(("doc_id",) + matrix.feature_names)
        for i, doc_id in enumerate(matrix.doc_ids):
            writer.writerow([doc_id] + [format_value(v) for v in matrix.values[i]])


def read_matrix_csv(path: str | Path, scale: Scale = Scale.RELATIVE_FREQUENCY) -> FeatureMatrix:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header or header[0] != "doc_id":
            raise AnalysisError(f"not a feature matrix CSV: {path}")
        names = tuple(header[1:])
        doc_ids = []
        rows = []
        for row in reader:
            doc_ids.append(row[0])
            rows.append([float(v) for v in row[1:]])
    return FeatureMatrix(
        doc_ids=tuple(doc_ids),
        feature_names=names,
        values=np.array(rows, dtype=float) if rows else np.zeros((0, len(names))),
        scale=scale,
    )


def load_word_list(path: str | Path) -> tuple[str, ...]:
    """One word per line; blank lines and ``#`` comments ignored."""
    words = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            word = line.strip()
            if word and not word.startswith("#"):
                words.append(word)
    return tuple(words)


def default_function_words() -> tuple[str, ...]:
    """The French function-word list shipped with the package."""
    data = Path(__file__).parent / "data" / "french_function_words.txt"
    return load_word_list(data)
