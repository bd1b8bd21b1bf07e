"""The arbitration kernel.

One `respond` call runs the preprocessing pipeline, asks every talker for a
proposal, ranks proposals by calibrated confidence, lets every talker react
to the ranked list in a follow-up round, filters for safety, and returns the
top candidate. Talkers that crash or overrun their per-round timeout are
silently treated as zero-confidence; the call as a whole always returns
within the global budget.
"""
from __future__ import annotations

import json
import logging
import queue
import random
import threading
import time
from dataclasses import dataclass, replace

from .config import EngineConfig
from .safety import blacklist_check
from .state import DialogueState
from .text import SpellCorrector, Token, resolve_references, tokenize

log = logging.getLogger(__name__)

PROPOSAL = "proposal"
FOLLOWUP = "followup"

CALIBRATION_GRID = [2.0**k for k in range(-3, 4)]
CALIBRATION_PASSES = 5


@dataclass(frozen=True)
class Candidate:
    talker_id: str
    text: str
    raw_confidence: float
    calibrated_confidence: float
    round: str = PROPOSAL

    @classmethod
    def zero(cls, talker_id: str, round: str = PROPOSAL) -> "Candidate":
        return cls(talker_id, "", 0.0, 0.0, round)


@dataclass
class CalibrationProfile:
    scale: dict[str, float]

    def factor(self, talker_id: str) -> float:
        return self.scale.get(talker_id, 1.0)

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump({"scale": self.scale}, fh, indent=2, sort_keys=True)

    @classmethod
    def load(cls, path) -> "CalibrationProfile":
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
        return cls(scale={k: float(v) for k, v in data["scale"].items()})


def _run_with_timeout(fn, args, timeout: float):
    """Run fn(*args) on a fresh daemon thread; None on timeout or error.

    One thread per invocation so a hung talker can never starve later calls
    the way a shared worker pool would.
    """
    if timeout <= 0:
        return None
    out: queue.Queue = queue.Queue(maxsize=1)

    def runner():
        try:
            out.put((True, fn(*args)))
        except Exception:
            log.warning("talker call failed", exc_info=True)
            out.put((False, None))

    t = threading.Thread(target=runner, daemon=True)
    t.start()
    try:
        ok, value = out.get(timeout=timeout)
    except queue.Empty:
        return None
    return value if ok else None


class Engine:
    def __init__(
        self,
        talkers: list,
        config: EngineConfig | None = None,
        blacklist: set[str] | None = None,
        spell_lexicon: set[str] | None = None,
        profile: CalibrationProfile | None = None,
    ):
        if not talkers:
            raise ValueError("at least one talker is required")
        config = config or EngineConfig()
        if config.enabled_talkers is not None:
            enabled = set(config.enabled_talkers)
            talkers = [t for t in talkers if t.talker_id in enabled]
            if not talkers:
                raise ValueError("enabled_talkers leaves no active talker")
        self.talkers = talkers
        self.config = config
        self.blacklist = blacklist or set()
        self.corrector = SpellCorrector(spell_lexicon or set())
        self.profile = profile or CalibrationProfile(scale={})
        self.last_calibration_report: dict | None = None
        self._priority = {tid: i for i, tid in enumerate(config.priority_order)}
        for talker in self.talkers:
            talker.attach_rng(random.Random(f"{config.seed}:{talker.talker_id}"))

    # -- pipeline ------------------------------------------------------------

    def preprocess(self, state: DialogueState, user_text: str) -> list[Token]:
        tokens = tokenize(user_text)
        protected = set(state.user_vocabulary)
        for talker in self.talkers:
            protected |= talker.vocabulary()
        corrected = self.corrector.correct(tokens, protected=protected)
        for tok in tokens + corrected:
            if tok.is_word:
                state.user_vocabulary.add(tok.normalized)
        return resolve_references(corrected, state)

    def _ranked(self, candidates: list[Candidate]) -> list[Candidate]:
        return sorted(
            candidates,
            key=lambda c: (
                -c.calibrated_confidence,
                self._priority.get(c.talker_id, len(self._priority)),
                c.text,
            ),
        )

    def _calibrated(self, cand: Candidate) -> Candidate:
        scale = self.profile.factor(cand.talker_id)
        return replace(cand, calibrated_confidence=scale * cand.raw_confidence)

    def _round(self, fn_name: str, args_of, deadline: float, round_tag: str) -> dict[str, Candidate]:
        """Run one protocol round across all talkers, isolating each failure."""
        results: dict[str, Candidate] = {}
        inline = not self.config.parallel

        def invoke(talker, timeout):
            fn = getattr(talker, fn_name)
            if inline:
                try:
                    return fn(*args_of(talker))
                except Exception:
                    log.warning("talker %s failed", talker.talker_id, exc_info=True)
                    return None
            return _run_with_timeout(fn, args_of(talker), timeout)

        if inline:
            for talker in self.talkers:
                if time.monotonic() >= deadline:
                    break
                results[talker.talker_id] = self._accept(talker, invoke(talker, None), round_tag)
            return results

        threads = []
        out: dict[str, Candidate | None] = {}
        lock = threading.Lock()

        def run_one(talker):
            remaining = deadline - time.monotonic()
            timeout = min(self.config.talker_timeout_seconds, remaining)
            value = _run_with_timeout(getattr(talker, fn_name), args_of(talker), timeout)
            with lock:
                out[talker.talker_id] = value

        for talker in self.talkers:
            t = threading.Thread(target=run_one, args=(talker,), daemon=True)
            t.start()
            threads.append(t)
        for t in threads:
            t.join(max(0.0, deadline - time.monotonic()) + 0.05)
        for talker in self.talkers:
            results[talker.talker_id] = self._accept(
                talker, out.get(talker.talker_id), round_tag
            )
        return results

    def _accept(self, talker, value, round_tag: str) -> Candidate:
        if value is None:
            return Candidate.zero(talker.talker_id, round_tag)
        if not isinstance(value, Candidate):
            log.warning("talker %s returned %r, ignoring", talker.talker_id, type(value))
            return Candidate.zero(talker.talker_id, round_tag)
        if value.raw_confidence > 0 and not value.text:
            return Candidate.zero(talker.talker_id, round_tag)
        return self._calibrated(replace(value, round=round_tag))

    def respond(self, state: DialogueState, user_text: str) -> tuple[str, dict]:
        start = time.monotonic()
        deadline = start + self.config.budget_seconds
        tokens = self.preprocess(state, user_text)
        state.append_turn("user", user_text, tokens)

        proposals = self._round(
            "propose", lambda talker: (state, tokens), deadline, PROPOSAL
        )
        ranked_proposals = self._ranked(list(proposals.values()))

        merged = dict(proposals)
        if time.monotonic() < deadline:
            revisions = self._round(
                "follow_up",
                lambda talker: (state, list(ranked_proposals)),
                deadline,
                FOLLOWUP,
            )
            for tid, cand in revisions.items():
                if cand.raw_confidence > 0 and cand.text:
                    merged[tid] = cand

        final = self._ranked(self._postprocess_all(state, list(merged.values())))
        selected = self.select(final)
        reply = selected.text

        state.append_turn("bot", reply, tokenize(reply))
        debug = {
            "proposals": ranked_proposals,
            "final": final,
            "selected": selected,
            "elapsed": time.monotonic() - start,
        }
        return reply, debug

    def _postprocess_all(
        self, state: DialogueState, candidates: list[Candidate]
    ) -> list[Candidate]:
        out = []
        for cand in candidates:
            if cand.raw_confidence <= 0 or not cand.text:
                out.append(cand)
                continue
            if not blacklist_check(cand.text, self.blacklist, state.user_vocabulary):
                log.info("candidate from %s dropped by blacklist", cand.talker_id)
                continue
            out.append(replace(cand, text=capitalize(cand.text)))
        return out

    def select(self, candidates: list[Candidate]) -> Candidate:
        fallback = Candidate("fallback", self.config.fallback_reply, 0.0, 0.0)
        viable = [c for c in candidates if c.calibrated_confidence > 0 and c.text]
        if not viable:
            return fallback
        return self._ranked(viable)[0]

    # -- calibration ---------------------------------------------------------

    def calibrate(self, corpus: list[tuple[str, DialogueState, str]]) -> CalibrationProfile:
        """Fit per-talker confidence scales by coordinate ascent on top-1
        expected-winner accuracy over the given prompt corpus.
        """
        if not corpus:
            raise ValueError("calibration corpus is empty")
        known = {t.talker_id for t in self.talkers}
        for _, _, winner in corpus:
            if winner not in known:
                raise ValueError(f"expected winner {winner!r} is not a registered talker")

        raw_rows: list[tuple[dict[str, float], str]] = []
        for prompt, state, winner in corpus:
            tokens = tokenize(prompt)
            raws: dict[str, float] = {}
            for talker in self.talkers:
                try:
                    cand = talker.propose(state, tokens)
                    raws[talker.talker_id] = max(0.0, cand.raw_confidence) if cand else 0.0
                except Exception:
                    raws[talker.talker_id] = 0.0
            raw_rows.append((raws, winner))

        def accuracy(scale: dict[str, float]) -> float:
            hits = 0
            for raws, winner in raw_rows:
                best = max(
                    raws,
                    key=lambda tid: (
                        scale.get(tid, 1.0) * raws[tid],
                        -self._priority.get(tid, len(self._priority)),
                    ),
                )
                hits += best == winner
            return hits / len(raw_rows)

        scale = {t.talker_id: self.profile.factor(t.talker_id) for t in self.talkers}
        initial_acc = accuracy(scale)
        best_acc = initial_acc
        for _ in range(CALIBRATION_PASSES):
            improved = False
            for talker in self.talkers:
                tid = talker.talker_id
                base = scale[tid]
                for factor in CALIBRATION_GRID:
                    trial = dict(scale)
                    trial[tid] = base * factor
                    acc = accuracy(trial)
                    if acc > best_acc:
                        scale = trial
                        best_acc = acc
                        improved = True
            if not improved:
                break
        self.profile = CalibrationProfile(scale=scale)
        self.last_calibration_report = {
            "prompts": len(raw_rows),
            "initial_accuracy": initial_acc,
            "final_accuracy": best_acc,
        }
        return self.profile


def capitalize(text: str) -> str:
    for i, ch in enumerate(text):
        if ch.isalpha():
            return text[:i] + ch.upper() + text[i + 1 :]
        if not ch.isspace():
            return text
    return text
