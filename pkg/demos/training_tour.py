"""The three trainable parts: link embeddings, the toxicity gate, and
confidence calibration.

Everything here trains from scratch in a few seconds on toy data, then the
calibration step refits the real bundled profile and reports its accuracy.

Run:  python3 demos/training_tour.py
"""
import os

from talkerbox.bundle import (
    default_resource_dir,
    load_calibration_corpus,
    load_resources,
    make_engine,
)
from talkerbox.config import EngineConfig
from talkerbox.embeddings import SkipGramConfig, cosine, train_link_embeddings
from talkerbox.engine import CalibrationProfile
from talkerbox.safety import (
    ToxicityConfig,
    blacklist_check,
    label_pairs,
    predict_pair,
    train_toxicity,
)
from talkerbox.state import DialogueState


def embeddings_part() -> None:
    print("-- link embeddings from co-occurrence " + "-" * 24)
    pairs = [("X", "Y"), ("X", "Z"), ("Y", "Z")] * 20
    strangers = [f"t{i}" for i in range(17)]
    for i, a in enumerate(strangers):
        for b in strangers[i + 1 :]:
            pairs.append((a, b))
    table = train_link_embeddings(pairs, SkipGramConfig(dim=16, epochs=30, seed=7))
    x = table.vectors["X"]
    near = min(cosine(x, table.vectors["Y"]), cosine(x, table.vectors["Z"]))
    far = max(cosine(x, table.vectors[t]) for t in strangers)
    print(f"  X links only to Y and Z; {len(strangers)} strangers link among themselves")
    print(f"  worst linked similarity    = {near:+.3f}")
    print(f"  best stranger similarity   = {far:+.3f}")
    print(f"  loss {table.loss_trace[0]:.3f} -> {table.loss_trace[-1]:.3f} over training")
    print()


def toxicity_part(resources) -> None:
    print("-- the ingestion gate for dialogue pairs " + "-" * 21)
    blacklist = {"bloody", "damn", "crap"}
    raw = [
        ("that bloody storm wrecked the town", "damn wind all week"),
        ("crap warning from those people", "bloody rain again"),
        ("lovely weather today", "good morning sun"),
        ("the band played a good concert", "music all night"),
        ("a movie in the city", "good song today"),
        ("summer morning walks", "lovely sun today"),
    ]
    labeled = label_pairs(raw, blacklist, seed=0)
    model = train_toxicity(labeled, resources.table, ToxicityConfig(epochs=200))
    for a, b in (raw[0], raw[2]):
        p = predict_pair(model, a, b, resources.table)
        verdict = "rejected" if p >= 0.4 else "admitted"
        print(f"  p={p:.2f} {verdict:8}  {a!r} / {b!r}")
    print("  scrubbed copies of rude pairs train as positives too, so the")
    print("  gate also learns the company rude words keep.")

    decision = blacklist_check("what a dimwit", resources.blacklist)
    print(f"  reply check without user licence: ok={decision.ok} terms={decision.terms}")
    decision = blacklist_check("what a dimwit", resources.blacklist, user_vocabulary={"dimwit"})
    print(f"  same reply after the user said it: ok={decision.ok}")
    print()


def calibration_part(resources) -> None:
    print("-- refitting confidence calibration " + "-" * 26)
    rows = load_calibration_corpus(os.path.join(default_resource_dir(), "calibration.jsonl"))
    corpus = [
        (row["prompt"], DialogueState(article=row["article"]), row["winner"])
        for row in rows
    ]
    engine = make_engine(EngineConfig(parallel=False, seed=0), resources)
    engine.profile = CalibrationProfile(scale={})  # start from no scaling
    profile = engine.calibrate(corpus)
    summary = engine.last_calibration_report
    print(
        f"  accuracy {summary['initial_accuracy']:.3f} -> {summary['final_accuracy']:.3f} "
        f"on {summary['prompts']} prompts"
    )
    moved = {t: round(s, 2) for t, s in profile.scale.items() if abs(s - 1.0) > 1e-9}
    print(f"  talkers rescaled: {moved}")


if __name__ == "__main__":
    res = load_resources(EngineConfig(parallel=False))
    embeddings_part()
    toxicity_part(res)
    calibration_part(res)
