"""Concept lexicon: keyword clusters for UI components and visual elements.

The bundled lexicon (data/lexicon.json) groups keywords into 9 UI-component
clusters and 4 visual-element clusters and assigns each keyword a coarse POS
tag. Lookup is lemma-light: case-insensitive, possessive and plural suffixes
stripped, leading stopwords dropped.
"""

from __future__ import annotations

import hashlib
import json
from importlib import resources
from pathlib import Path

from .segment import tokenize

STOPWORDS = {"the", "a", "an", "this", "that"}

VISUAL_CLUSTERS = ("space-shape", "layout", "typography", "color")

UI_CLUSTERS = (
    "button-related",
    "text-related",
    "card-related",
    "divider-related",
    "color-related",
    "menus-related",
    "icon-related",
    "general element",
    "others",
)

UI_FALLBACK_CLUSTER = "others"

KINDS = ("ui_component", "visual_element")


def normalize_token(token: str) -> str:
    """Lowercase and strip possessive/plural suffixes (lemma-light)."""
    t = token.lower()
    for suffix in ("'s", "’s"):
        if t.endswith(suffix):
            t = t[: -len(suffix)]
            break
    if len(t) >= 4 and t.endswith("s") and not t.endswith("ss"):
        t = t[:-1]
    return t


def normalize_keyword(keyword: str) -> tuple[str, ...]:
    """Keyword as a tuple of normalized tokens, leading stopwords dropped."""
    toks = [t.text for t in tokenize(keyword)]
    while toks and toks[0].lower() in STOPWORDS:
        toks = toks[1:]
    return tuple(normalize_token(t) for t in toks if any(c.isalnum() for c in t))


def _trigrams(s: str) -> frozenset[str]:
    if not s:
        return frozenset()
    if len(s) < 3:
        return frozenset({s})
    return frozenset(s[i : i + 3] for i in range(len(s) - 2))


def _kind_key(kind: str) -> str:
    if kind in ("ui", "ui_component"):
        return "ui"
    if kind in ("visual", "visual_element"):
        return "visual"
    raise ValueError(f"unknown keyword kind: {kind!r}")


class ConceptLexicon:
    """Keyword clusters plus POS tags, with normalized lookup tables."""

    def __init__(
        self,
        ui_clusters: dict[str, list[str]],
        visual_clusters: dict[str, list[str]],
        pos_tags: dict[str, str],
    ):
        if tuple(visual_clusters) != VISUAL_CLUSTERS:
            raise ValueError(
                f"visual cluster names must be {VISUAL_CLUSTERS}, got {tuple(visual_clusters)}"
            )
        if tuple(ui_clusters) != UI_CLUSTERS:
            raise ValueError(
                f"UI cluster names must be {UI_CLUSTERS}, got {tuple(ui_clusters)}"
            )
        self.ui_clusters = {name: list(kws) for name, kws in ui_clusters.items()}
        self.visual_clusters = {name: list(kws) for name, kws in visual_clusters.items()}
        self.pos_tags = dict(pos_tags)

        # kind -> normalized token tuple -> (cluster, raw keyword)
        self._lookup: dict[str, dict[tuple[str, ...], tuple[str, str]]] = {"ui": {}, "visual": {}}
        self._max_len = {"ui": 0, "visual": 0}
        for key, clusters in (("ui", self.ui_clusters), ("visual", self.visual_clusters)):
            for cluster, kws in clusters.items():
                for kw in kws:
                    norm = normalize_keyword(kw)
                    if not norm:
                        raise ValueError(f"keyword {kw!r} normalizes to nothing")
                    prior = self._lookup[key].get(norm)
                    if prior is not None and prior[0] != cluster:
                        raise ValueError(
                            f"{kw!r} collides with {prior[1]!r} across clusters {cluster!r}/{prior[0]!r}"
                        )
                    self._lookup[key][norm] = (cluster, kw)
                    self._max_len[key] = max(self._max_len[key], len(norm))

        self._pos_by_norm: dict[tuple[str, ...], str] = {}
        for kw, pos in self.pos_tags.items():
            self._pos_by_norm.setdefault(normalize_keyword(kw), pos)

        # cluster -> union of member trigram sets, for the similarity fallback
        self._cluster_grams: dict[str, dict[str, frozenset[str]]] = {"ui": {}, "visual": {}}
        for key, clusters in (("ui", self.ui_clusters), ("visual", self.visual_clusters)):
            for cluster, kws in clusters.items():
                grams: set[str] = set()
                for kw in kws:
                    grams |= _trigrams(" ".join(normalize_keyword(kw)))
                self._cluster_grams[key][cluster] = frozenset(grams)

    @classmethod
    def from_file(cls, path: str | Path) -> "ConceptLexicon":
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
        return cls(raw["ui_clusters"], raw["visual_clusters"], raw["pos_tags"])

    @classmethod
    def default(cls) -> "ConceptLexicon":
        raw = json.loads(
            resources.files("critiquiz.data").joinpath("lexicon.json").read_text("utf-8")
        )
        return cls(raw["ui_clusters"], raw["visual_clusters"], raw["pos_tags"])

    def to_dict(self) -> dict:
        return {
            "ui_clusters": self.ui_clusters,
            "visual_clusters": self.visual_clusters,
            "pos_tags": self.pos_tags,
        }

    def digest(self) -> str:
        canon = json.dumps(self.to_dict(), sort_keys=True, ensure_ascii=False, separators=(",", ":"))
        return hashlib.sha256(canon.encode("utf-8")).hexdigest()

    def clusters(self, kind: str) -> dict[str, list[str]]:
        return self.ui_clusters if _kind_key(kind) == "ui" else self.visual_clusters

    def cluster_names(self, kind: str) -> tuple[str, ...]:
        return tuple(self.clusters(kind))

    def keywords(self, kind: str):
        for kws in self.clusters(kind).values():
            yield from kws

    def lookup(self, norm: tuple[str, ...], kind: str) -> tuple[str, str] | None:
        return self._lookup[_kind_key(kind)].get(norm)

    def max_entry_len(self, kind: str) -> int:
        return self._max_len[_kind_key(kind)]

    def home_cluster(self, keyword: str, kind: str) -> str | None:
        hit = self.lookup(normalize_keyword(keyword), kind)
        return hit[0] if hit else None

    def pos_of(self, keyword: str) -> str:
        if keyword in self.pos_tags:
            return self.pos_tags[keyword]
        return self._pos_by_norm.get(normalize_keyword(keyword), "other")

    def cluster_similarity(self, keyword: str, kind: str) -> dict[str, float]:
        """Character-trigram Jaccard of the keyword against each cluster."""
        grams = _trigrams(" ".join(normalize_keyword(keyword)))
        sims: dict[str, float] = {}
        for cluster, cluster_grams in self._cluster_grams[_kind_key(kind)].items():
            union = grams | cluster_grams
            sims[cluster] = len(grams & cluster_grams) / len(union) if union else 0.0
        return sims


def assign_cluster(keyword: str, kind: str, lex: ConceptLexicon) -> str:
    """Cluster for a keyword: exact lexicon membership, else nearest cluster
    by trigram similarity. Total: a zero-signal UI keyword lands in "others",
    a zero-signal visual keyword in the first cluster of the canonical order.
    """
    home = lex.home_cluster(keyword, kind)
    if home is not None:
        return home
    sims = lex.cluster_similarity(keyword, kind)
    names = lex.cluster_names(kind)
    best = max(names, key=lambda name: sims[name])
    if sims[best] == 0.0 and _kind_key(kind) == "ui":
        return UI_FALLBACK_CLUSTER
    return best
