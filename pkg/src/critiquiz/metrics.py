"""Evaluation metrics: ROUGE-1/2/L, classification accuracy/P/R/F1, and
token-level tagging scores with B-*/I-* merged per kind.

Conventions: precision/recall are 0 when their denominator is 0 (and F1 is
then 0); ROUGE on two empty texts is defined as 1.0, on one empty text 0.0.
No stemming, no stopword removal; tokens are case-folded pipeline tokens.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .segment import tokenize


@dataclass(frozen=True)
class Score:
    precision: float
    recall: float
    f1: float

    def as_dict(self) -> dict[str, float]:
        return {"precision": self.precision, "recall": self.recall, "f1": self.f1}


def _f1(precision: float, recall: float) -> float:
    if precision + recall == 0.0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def _prf(matched: float, pred_total: float, gold_total: float) -> Score:
    precision = matched / pred_total if pred_total else 0.0
    recall = matched / gold_total if gold_total else 0.0
    return Score(precision, recall, _f1(precision, recall))


def _tokens(text: str) -> list[str]:
    return [t.text.lower() for t in tokenize(text)]


def _ngrams(tokens: list[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def _overlap(candidate: Counter, reference: Counter) -> int:
    return sum(min(count, reference[gram]) for gram, count in candidate.items())


def _lcs_length(a: list[str], b: list[str]) -> int:
    if not a or not b:
        return 0
    previous = [0] * (len(b) + 1)
    for ca in a:
        current = [0]
        for j, cb in enumerate(b, start=1):
            if ca == cb:
                current.append(previous[j - 1] + 1)
            else:
                current.append(max(previous[j], current[j - 1]))
        previous = current
    return previous[len(b)]


def rouge_scores(candidate: str, reference: str) -> dict[str, Score]:
    """ROUGE-1, ROUGE-2 (clipped n-gram overlap) and ROUGE-L (LCS)."""
    cand, ref = _tokens(candidate), _tokens(reference)
    if not cand and not ref:
        one = Score(1.0, 1.0, 1.0)
        return {"rouge1": one, "rouge2": one, "rougeL": one}
    if not cand or not ref:
        zero = Score(0.0, 0.0, 0.0)
        return {"rouge1": zero, "rouge2": zero, "rougeL": zero}

    scores: dict[str, Score] = {}
    for key, n in (("rouge1", 1), ("rouge2", 2)):
        cand_grams, ref_grams = _ngrams(cand, n), _ngrams(ref, n)
        matched = _overlap(cand_grams, ref_grams)
        scores[key] = _prf(matched, sum(cand_grams.values()), sum(ref_grams.values()))
    lcs = _lcs_length(cand, ref)
    scores["rougeL"] = _prf(lcs, len(cand), len(ref))
    return scores


def classification_metrics(pred: list[str], gold: list[str]) -> dict:
    """Accuracy plus per-class/macro/weighted precision, recall and F1."""
    if len(pred) != len(gold):
        raise ValueError(f"length mismatch: {len(pred)} predictions vs {len(gold)} gold labels")
    classes = sorted(set(gold) | set(pred))
    correct = sum(p == g for p, g in zip(pred, gold))
    per_class: dict[str, Score] = {}
    supports: dict[str, int] = {}
    for cls in classes:
        tp = sum(1 for p, g in zip(pred, gold) if p == cls and g == cls)
        pred_total = sum(1 for p in pred if p == cls)
        gold_total = sum(1 for g in gold if g == cls)
        per_class[cls] = _prf(tp, pred_total, gold_total)
        supports[cls] = gold_total

    total = len(gold)
    macro = Score(
        precision=sum(s.precision for s in per_class.values()) / len(classes) if classes else 0.0,
        recall=sum(s.recall for s in per_class.values()) / len(classes) if classes else 0.0,
        f1=sum(s.f1 for s in per_class.values()) / len(classes) if classes else 0.0,
    )
    weighted = Score(
        precision=sum(per_class[c].precision * supports[c] for c in classes) / total if total else 0.0,
        recall=sum(per_class[c].recall * supports[c] for c in classes) / total if total else 0.0,
        f1=sum(per_class[c].f1 * supports[c] for c in classes) / total if total else 0.0,
    )
    return {
        "accuracy": correct / total if total else 0.0,
        "per_class": {cls: score.as_dict() for cls, score in per_class.items()},
        "support": supports,
        "macro": macro.as_dict(),
        "weighted": weighted.as_dict(),
    }


def _merge_tag(tag: str) -> str:
    if tag in ("B-ui", "I-ui"):
        return "ui"
    if tag in ("B-visual", "I-visual"):
        return "visual"
    if tag == "O":
        return "O"
    raise ValueError(f"unknown BIO tag {tag!r}")


def tagging_metrics(pred: list[list[str]], gold: list[list[str]]) -> dict:
    """Token-level scores with B-* and I-* merged per kind.

    pred and gold are per-sentence BIO tag sequences over identical
    tokenizations; a length mismatch raises ValueError.
    """
    if len(pred) != len(gold):
        raise ValueError(f"sentence count mismatch: {len(pred)} vs {len(gold)}")
    flat_pred: list[str] = []
    flat_gold: list[str] = []
    for i, (p_tags, g_tags) in enumerate(zip(pred, gold)):
        if len(p_tags) != len(g_tags):
            raise ValueError(
                f"tokenization mismatch in sentence {i}: {len(p_tags)} vs {len(g_tags)} tokens"
            )
        flat_pred.extend(_merge_tag(t) for t in p_tags)
        flat_gold.extend(_merge_tag(t) for t in g_tags)

    total = len(flat_gold)
    accuracy = (
        sum(p == g for p, g in zip(flat_pred, flat_gold)) / total if total else 0.0
    )
    per_kind: dict[str, Score] = {}
    for kind in ("ui", "visual"):
        tp = sum(1 for p, g in zip(flat_pred, flat_gold) if p == kind and g == kind)
        per_kind[kind] = _prf(
            tp,
            sum(1 for p in flat_pred if p == kind),
            sum(1 for g in flat_gold if g == kind),
        )
    micro_tp = sum(
        1 for p, g in zip(flat_pred, flat_gold) if p != "O" and p == g
    )
    micro = _prf(
        micro_tp,
        sum(1 for p in flat_pred if p != "O"),
        sum(1 for g in flat_gold if g != "O"),
    )
    return {
        "accuracy": accuracy,
        "per_kind": {kind: score.as_dict() for kind, score in per_kind.items()},
        "micro": micro.as_dict(),
        "tokens": total,
    }
