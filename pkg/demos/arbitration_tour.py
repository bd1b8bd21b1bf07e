"""How the engine arbitrates between talkers, and what happens when one hangs.

Part 1 wires up scripted talkers with fixed confidences and shows the ranked
grid for a single turn.  Part 2 replaces one of them with a talker that
sleeps for ten seconds and demonstrates that replies still arrive inside the
time budget, served by whoever answered in time.

Run:  python3 demos/arbitration_tour.py
"""
import time

from talkerbox.config import EngineConfig
from talkerbox.engine import Engine
from talkerbox.state import DialogueState
from talkerbox.talkers.base import Talker


class Scripted(Talker):
    def __init__(self, talker_id, text, confidence, delay=0.0):
        super().__init__(talker_id)
        self.text = text
        self.confidence = confidence
        self.delay = delay

    def propose(self, state, tokens):
        if self.delay:
            time.sleep(self.delay)
        return self.candidate(self.text, self.confidence)


def part_one() -> None:
    print("-- one turn, twelve opinions " + "-" * 33)
    grid = [
        ("wiki_qa", 1.12, "I'd say Australia."),
        ("dbpedia", 0.46, "A continent is one of several very large landmasses on Earth."),
        ("quotes", 0.41, "A life is not important except in the impact it has on other lives."),
        ("alice", 0.40, "That's not something I get asked all the time."),
        ("facts", 0.22, "Interesting fact: Monica is a female given name."),
        ("knn_chat", 0.01, "What is it that you want to know?"),
        ("gimmick", 0.00, "Well..."),
    ]
    talkers = [Scripted(tid, text, conf) for tid, conf, text in grid]
    engine = Engine(talkers, config=EngineConfig(parallel=False, seed=0))
    reply, debug = engine.respond(
        DialogueState(), "What continent did cyclone Monica impact?"
    )
    for cand in debug["final"]:
        print(f"  {cand.calibrated_confidence:>5.2f}  {cand.talker_id:<8}  {cand.text[:58]}")
    print(f"  reply: {reply}")
    print()


def part_two() -> None:
    print("-- a hung talker cannot stall the conversation " + "-" * 15)
    talkers = [
        Scripted("wiki_qa", "Too late to matter.", 0.9, delay=10.0),
        Scripted("facts", "Interesting fact: water is wet.", 0.7),
        Scripted("quotes", "Brevity is the soul of wit.", 0.4),
    ]
    config = EngineConfig(seed=3)  # parallel rounds, 3 s budget, 1 s per talker
    engine = Engine(talkers, config=config)
    state = DialogueState()
    for i in range(3):
        start = time.monotonic()
        reply, _ = engine.respond(state, f"say something {i}")
        elapsed = time.monotonic() - start
        print(f"  call {i}: {elapsed:.2f} s  ->  {reply}")
    print("  the 10 s sleeper missed every round; the budget held.")


if __name__ == "__main__":
    part_one()
    part_two()
