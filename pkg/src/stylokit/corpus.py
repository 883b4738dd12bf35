"""Corpus ingestion: token files, manifests, normalization, filtering.

Token files carry one token per line as FORM<TAB>LEMMA<TAB>POS, with a
blank line closing each verse and ``#`` starting a comment line. All
forms and lemmas are lowercased and stripped of punctuation on the way
in; tokens that vanish under that normalization are dropped entirely.
Proper-name tokens (POS prefix ``NOMpro``) are kept in the document --
morphosyntactic extractors need them -- but are skipped by the lexical
extractors.
"""

from __future__ import annotations

import csv
import os
import unicodedata
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from .errors import AnalysisError, CorpusFormatError

PROPER_NOUN_PREFIX = "NOMpro"

# Apostrophes are the one punctuation mark that stays: French elision
# ("l'", "c'", "s'") is a high-frequency stylistic signal.
_KEPT_PUNCT = {"'"}
_APOSTROPHE_VARIANTS = {"’": "'"}


def _strip_punctuation(text: str) -> str:
    out = []
    for ch in text:
        ch = _APOSTROPHE_VARIANTS.get(ch, ch)
        if unicodedata.category(ch).startswith("P") and ch not in _KEPT_PUNCT:
            continue
        out.append(ch)
    return "".join(out)


@dataclass(frozen=True)
class AnnotatedToken:
    form: str
    lemma: str
    pos: str

    @property
    def is_proper_noun(self) -> bool:
        return self.pos.startswith(PROPER_NOUN_PREFIX)


@dataclass(frozen=True)
class Verse:
    tokens: tuple[AnnotatedToken, ...]

    def __post_init__(self) -> None:
        if not self.tokens:
            raise ValueError("a verse holds at least one token")

    @property
    def rhyme_token(self) -> AnnotatedToken:
        return self.tokens[-1]


@dataclass(frozen=True)
class DocumentMeta:
    id: str
    title: str = ""
    alleged_author: str = ""
    genre: str = ""
    form: str = "verse"
    act_count: int = 0
    year: int | None = None


@dataclass(frozen=True)
class Document:
    meta: DocumentMeta
    verses: tuple[Verse, ...]

    @property
    def token_count(self) -> int:
        return sum(len(v.tokens) for v in self.verses)

    @property
    def lexical_token_count(self) -> int:
        """Tokens counted by the lexical feature families (proper nouns excluded)."""
        return sum(1 for t in self.tokens() if not t.is_proper_noun)

    def tokens(self) -> Iterator[AnnotatedToken]:
        for verse in self.verses:
            yield from verse.tokens

    def lexical_tokens(self) -> Iterator[AnnotatedToken]:
        for tok in self.tokens():
            if not tok.is_proper_noun:
                yield tok


@dataclass(frozen=True)
class Corpus:
    documents: tuple[Document, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        ids = [d.meta.id for d in self.documents]
        if len(set(ids)) != len(ids):
            dupes = sorted({i for i in ids if ids.count(i) > 1})
            raise CorpusFormatError(f"duplicate document ids: {dupes}")

    def __len__(self) -> int:
        return len(self.documents)

    def __iter__(self) -> Iterator[Document]:
        return iter(self.documents)

    @property
    def doc_ids(self) -> tuple[str, ...]:
        return tuple(d.meta.id for d in self.documents)

    def alleged_authors(self) -> dict[str, str]:
        return {d.meta.id: d.meta.alleged_author for d in self.documents}


def normalize_token(raw_form: str, lemma: str, pos: str) -> AnnotatedToken | None:
    """Lowercase and strip punctuation; return None when nothing survives.

    Proper-name tokens are normalized and returned like any other: the
    decision to skip them belongs to the lexical extractors, because POS
    n-grams still consume them.
    """
    form = _strip_punctuation(raw_form.lower())
    lem = _strip_punctuation(lemma.lower())
    if not form or not lem:
        return None
    return AnnotatedToken(form=form, lemma=lem, pos=pos)


def parse_document(lines: Iterable[str], meta: DocumentMeta) -> Document:
    """Build a Document from FORM/LEMMA/POS lines with blank-line verse breaks.

    A trailing verse without a closing blank line is accepted. Raises
    CorpusFormatError on malformed lines (naming the line number) or when
    no token survives at all.
    """
    verses: list[Verse] = []
    current: list[AnnotatedToken] = []

    def close_verse() -> None:
        if current:
            verses.append(Verse(tokens=tuple(current)))
            current.clear()

    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\r\n")
        if line.startswith("#"):
            continue
        if not line.strip():
            close_verse()
            continue
        fields = line.split("\t")
        if len(fields) != 3:
            raise CorpusFormatError(
                f"{meta.id}: line {lineno}: expected FORM<TAB>LEMMA<TAB>POS, "
                f"got {len(fields)} field(s)"
            )
        token = normalize_token(*fields)
        if token is not None:
            current.append(token)
    close_verse()

    if not verses:
        raise CorpusFormatError(f"{meta.id}: empty document")
    return Document(meta=meta, verses=tuple(verses))


def parse_token_file(path: str | Path, meta: DocumentMeta) -> Document:
    with open(path, encoding="utf-8") as fh:
        return parse_document(fh, meta)


def write_token_file(doc: Document, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for verse in doc.verses:
            for tok in verse.tokens:
                fh.write(f"{tok.form}\t{tok.lemma}\t{tok.pos}\n")
            fh.write("\n")


MANIFEST_FIELDS = ("id", "title", "author", "genre", "form", "acts", "year", "path")


def _parse_manifest_row(row: dict[str, str], manifest_dir: Path) -> tuple[DocumentMeta, Path]:
    meta = DocumentMeta(
        id=row["id"],
        title=row["title"],
        alleged_author=row["author"],
        genre=row["genre"],
        form=row["form"],
        act_count=int(row["acts"]) if row["acts"] else 0,
        year=int(row["year"]) if row["year"] else None,
    )
    path = Path(row["path"])
    if not path.is_absolute():
        path = manifest_dir / path
    return meta, path


def max_workers() -> int:
    """Worker cap for document-level parallelism, from STYLO_THREADS."""
    env = os.environ.get("STYLO_THREADS", "")
    if env.strip():
        try:
            return max(1, int(env))
        except ValueError:
            raise CorpusFormatError(f"STYLO_THREADS is not an integer: {env!r}") from None
    return min(8, os.cpu_count() or 1)


def load_manifest(manifest_path: str | Path) -> Corpus:
    """Read a manifest CSV and parse every token file it points to.

    The manifest has the header ``id,title,author,genre,form,acts,year,path``
    with paths resolved relative to the manifest location. Documents keep
    manifest order.
    """
    manifest_path = Path(manifest_path)
    if not manifest_path.exists():
        raise CorpusFormatError(f"manifest not found: {manifest_path}")
    with open(manifest_path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or tuple(reader.fieldnames) != MANIFEST_FIELDS:
            raise CorpusFormatError(
                f"manifest header must be {','.join(MANIFEST_FIELDS)}, "
                f"got {reader.fieldnames}"
            )
        rows = [_parse_manifest_row(row, manifest_path.parent) for row in reader]
    if not rows:
        raise CorpusFormatError(f"manifest is empty: {manifest_path}")

    with ThreadPoolExecutor(max_workers=max_workers()) as pool:
        docs = list(pool.map(lambda mp: parse_token_file(mp[1], mp[0]), rows))
    return Corpus(documents=tuple(docs))


def filter_corpus(corpus: Corpus, min_tokens: int, min_plays_per_author: int) -> Corpus:
    """Apply the length rule, then the plays-per-author rule to a fixed point.

    Documents shorter than ``min_tokens`` go first; afterwards every author
    with fewer than ``min_plays_per_author`` surviving documents loses all
    of them, repeated until stable.
    """
    if min_tokens < 0:
        raise ValueError("min_tokens must be >= 0")
    if min_plays_per_author < 1:
        raise ValueError("min_plays_per_author must be >= 1")

    docs = [d for d in corpus.documents if d.token_count >= min_tokens]
    while True:
        counts: dict[str, int] = {}
        for d in docs:
            counts[d.meta.alleged_author] = counts.get(d.meta.alleged_author, 0) + 1
        kept = [d for d in docs if counts[d.meta.alleged_author] >= min_plays_per_author]
        if len(kept) == len(docs):
            break
        docs = kept
    if not docs:
        raise AnalysisError("no documents survive filtering")
    return Corpus(documents=tuple(docs))
