"""A complete scripted chat session against the bundled knowledge snapshot.

Seeds an engine with an opening article, walks through a handful of user
turns, and prints the ranked candidate list behind every reply so you can
watch the arbitration pick winners.

Run:  python3 demos/chat_session.py
"""
from talkerbox.bundle import load_resources, make_engine
from talkerbox.config import EngineConfig
from talkerbox.state import DialogueState

ARTICLE = (
    "Cyclone Monica was the most intense tropical cyclone on record to strike "
    "Australia. It formed in the Coral Sea and crossed the coast of the "
    "Northern Territory near Maningrida."
)

TURNS = [
    "Hello there",
    "What is this article about?",
    "What continent did cyclone Monica impact",
    "What is 2 plus 2",
    "when did the war start",
    "Tell me something interesting",
]


def main() -> None:
    config = EngineConfig(parallel=False, seed=11)
    engine = make_engine(config, load_resources(config))
    state = DialogueState(article=ARTICLE)

    print("article:", ARTICLE[:72] + "...")
    print()
    for text in TURNS:
        reply, debug = engine.respond(state, text)
        print(f"you> {text}")
        print(f"bot> {reply}")
        width = max(len(c.talker_id) for c in debug["final"])
        for cand in debug["final"][:4]:
            marker = "*" if cand.talker_id == debug["selected"].talker_id else " "
            print(
                f"   {marker} {cand.talker_id:<{width}}  "
                f"{cand.calibrated_confidence:>6.2f}  {cand.text[:60]}"
            )
        print(f"     ({len(debug['final'])} candidates, {debug['elapsed'] * 1000:.0f} ms)")
        print()


if __name__ == "__main__":
    main()
