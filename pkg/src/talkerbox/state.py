"""Per-conversation dialogue state shared by the engine and the talkers."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

__all__ = ["Turn", "DialogueState"]


@dataclass
class Turn:
    speaker: str  # "user" | "bot"
    raw: str
    processed: list  # token sequence after the preprocessing pipeline


@dataclass
class DialogueState:
    """Conversation context: the opening article, the turn history, words the
    user has introduced, and one opaque private slot per talker.
    """

    article: str = ""
    history: list[Turn] = field(default_factory=list)
    user_vocabulary: set[str] = field(default_factory=set)
    turn_index: int = 0
    slots: dict[str, Any] = field(default_factory=dict)

    def append_turn(self, speaker: str, raw: str, processed: str) -> None:
        self.history.append(Turn(speaker, raw, processed))
        self.turn_index += 1

    def slot(self, talker_id: str, factory=dict) -> Any:
        if talker_id not in self.slots:
            self.slots[talker_id] = factory()
        return self.slots[talker_id]

    def user_turns(self, n: int | None = None) -> list[Turn]:
        turns = [t for t in self.history if t.speaker == "user"]
        return turns if n is None else turns[-n:]

    def bot_turns(self, n: int | None = None) -> list[Turn]:
        turns = [t for t in self.history if t.speaker == "bot"]
        return turns if n is None else turns[-n:]
