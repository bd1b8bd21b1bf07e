"""The behavioral contract every talker implements."""
from __future__ import annotations

import random

from ..engine import FOLLOWUP, PROPOSAL, Candidate
from ..state import DialogueState
from ..text import Token


class Talker:
    """One reply generator.

    Subclasses implement propose(); follow_up() defaults to "no revision".
    The engine attaches a per-talker seeded RNG before the first round, so a
    fixed engine seed reproduces whole dialogues byte for byte.
    """

    talker_id: str = "talker"

    def __init__(self, talker_id: str | None = None):
        if talker_id is not None:
            self.talker_id = talker_id
        self.rng = random.Random(f"0:{self.talker_id}")

    def attach_rng(self, rng: random.Random) -> None:
        self.rng = rng

    def propose(self, state: DialogueState, tokens: list[Token]) -> Candidate:
        raise NotImplementedError

    def follow_up(
        self, state: DialogueState, ranked: list[Candidate]
    ) -> Candidate | None:
        return None

    def vocabulary(self) -> set[str]:
        """Words this talker understands natively; protected from spell repair."""
        return set()

    def candidate(self, text: str, confidence: float, round: str = PROPOSAL) -> Candidate:
        confidence = max(0.0, float(confidence))
        return Candidate(
            talker_id=self.talker_id,
            text=text,
            raw_confidence=confidence,
            calibrated_confidence=confidence,
            round=round,
        )

    def nothing(self) -> Candidate:
        return Candidate.zero(self.talker_id)
