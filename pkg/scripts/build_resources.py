#!/usr/bin/env python3
"""Regenerate the bundled data files under src/talkerbox/resources/.

Everything here is deterministic: corpora are authored inline, derived
artifacts (term statistics, word vectors, title link vectors, the word log,
the spelling lexicon) are computed with fixed seeds.  Running the script
twice produces byte-identical output, so the generated files can live in
version control and `git diff` stays quiet unless the inputs change.

Usage:
    python3 scripts/build_resources.py [--out DIR]
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from talkerbox.embeddings import EmbeddingTable, SkipGramConfig, train_link_embeddings
from talkerbox.text import STOPWORDS, TermStats, tokenize

# ---------------------------------------------------------------------------
# Encyclopedia-style definition pages.  The first sentence of each page is the
# one served verbatim for "what is X" questions, so it has to stand alone.
# ---------------------------------------------------------------------------

DEFINITIONS = [
    {
        "title": "Continent",
        "sentences": [
            "A continent is a large area of the land on Earth that is joined together.",
            "Most people count seven continents: Africa, Antarctica, Asia, Australia, Europe, North America, and South America.",
            "Continents are larger than islands and usually sit on their own tectonic plates.",
        ],
        "links": ["Australia", "Earth", "Ocean"],
    },
    {
        "title": "Australia",
        "sentences": [
            "Australia is a country and a continent surrounded by the Indian and Pacific oceans.",
            "Australia is known for its outback, its coral reefs, and its unusual wildlife.",
            "The capital of Australia is Canberra, while Sydney is the largest city.",
        ],
        "links": ["Continent", "Canberra", "Cyclone Monica"],
    },
    {
        "title": "Cyclone",
        "sentences": [
            "A cyclone is a large mass of air that rotates around a strong center of low atmospheric pressure.",
            "Cyclones bring heavy rain and destructive wind to the regions they cross.",
            "Meteorologists grade tropical cyclones into categories by their wind speed.",
        ],
        "links": ["Storm", "Cyclone Monica"],
    },
    {
        "title": "Cyclone Monica",
        "sentences": [
            "Cyclone Monica was a powerful tropical storm that crossed northern Australia in April 2006.",
            "Monica formed over the Coral Sea and strengthened quickly into a category five cyclone before landfall.",
            "The storm passed close to the remote Aboriginal community of Maningrida on the coast.",
        ],
        "links": ["Cyclone", "Australia", "Storm"],
    },
    {
        "title": "Storm",
        "sentences": [
            "A storm is any disturbed state of the atmosphere that strongly affects the surface below it.",
            "Storms range from brief thunderstorms to tropical cyclones that last for days.",
        ],
        "links": ["Cyclone"],
    },
    {
        "title": "Ocean",
        "sentences": [
            "An ocean is a huge body of salt water that covers most of the surface of Earth.",
            "The Pacific is the largest ocean, followed by the Atlantic and the Indian oceans.",
        ],
        "links": ["Earth", "Continent"],
    },
    {
        "title": "Earth",
        "sentences": [
            "Earth is the third planet from the Sun and the only known place that supports life.",
            "Most of the surface of Earth is covered by oceans of salt water.",
        ],
        "links": ["Continent", "Ocean"],
    },
    {
        "title": "Alan Turing",
        "sentences": [
            "Alan Turing was born in Maida Vale, London.",
            "Turing went to St. Michael's, a school at 20 Charles Road, St Leonards-on-sea, when he was six years old.",
            "His father was part of a family of merchants from Scotland.",
            "His mother, Ethel Sara, was the daughter of an engineer.",
        ],
        "links": ["Computer", "Mathematics"],
    },
    {
        "title": "Albert Einstein",
        "sentences": [
            "Albert Einstein was a theoretical physicist born in the German city of Ulm in 1879.",
            "Einstein developed the theory of relativity and won the Nobel Prize in Physics in 1921.",
            "His later years were spent in Princeton, New Jersey.",
        ],
        "links": ["Physics", "Mathematics"],
    },
    {
        "title": "Computer",
        "sentences": [
            "A computer is a machine that follows stored instructions to process information.",
            "Computers range from tiny embedded chips to warehouse-sized clusters.",
        ],
        "links": ["Alan Turing", "Mathematics"],
    },
    {
        "title": "Mathematics",
        "sentences": [
            "Mathematics is the study of numbers, shapes, and the patterns that connect them.",
            "Mathematics underpins physics, engineering, and computing.",
        ],
        "links": ["Computer", "Physics"],
    },
    {
        "title": "Physics",
        "sentences": [
            "Physics is the natural science that studies matter, energy, and motion.",
            "Physics explains phenomena from falling apples to spiraling galaxies.",
        ],
        "links": ["Albert Einstein", "Mathematics"],
    },
    {
        "title": "Monica",
        "sentences": [
            "Monica is a female given name.",
            "The name Monica spread across Europe through the fame of Saint Monica of Hippo.",
        ],
        "links": [],
    },
    {
        "title": "Coffee",
        "sentences": [
            "Coffee is a brewed drink made from roasted coffee beans.",
            "Coffee is among the most traded agricultural products in the world.",
        ],
        "links": [],
    },
    {
        "title": "Hamburger",
        "sentences": [
            "A hamburger is a sandwich made of a cooked meat patty inside a sliced bun.",
            "Hamburgers are often served with cheese, lettuce, and tomato.",
        ],
        "links": ["Coffee"],
    },
    {
        "title": "Paris",
        "sentences": [
            "Paris is the capital and most populous city of France.",
            "Paris is known for the Eiffel Tower and the Louvre museum.",
        ],
        "links": [],
    },
    {
        "title": "Canberra",
        "sentences": [
            "Canberra is the capital city of Australia.",
            "Canberra was purpose-built as a compromise between Sydney and Melbourne.",
        ],
        "links": ["Australia"],
    },
    {
        "title": "Music",
        "sentences": [
            "Music is the art of arranging sound in time through melody, harmony, and rhythm.",
            "Every known human culture makes music of some kind.",
        ],
        "links": [],
    },
]

# ---------------------------------------------------------------------------
# Structured attribute triples, with per-resource prominence ranks.
# ---------------------------------------------------------------------------

TRIPLES = [
    ("Albert Einstein", "spouse", "Mileva Marić"),
    ("Albert Einstein", "spouse", "Elsa Löwenthal"),
    ("Albert Einstein", "birth year", "1879"),
    ("Albert Einstein", "death year", "1955"),
    ("Albert Einstein", "birth place", "Ulm"),
    ("Albert Einstein", "field", "physics"),
    ("Albert Einstein", "abstract", "Albert Einstein was a theoretical physicist who developed the theory of relativity."),
    ("Alan Turing", "birth year", "1912"),
    ("Alan Turing", "death year", "1954"),
    ("Alan Turing", "birth place", "Maida Vale"),
    ("Alan Turing", "field", "computer science"),
    ("Alan Turing", "abstract", "Alan Turing was a pioneer of theoretical computer science and artificial intelligence."),
    ("Marie Curie", "spouse", "Pierre Curie"),
    ("Marie Curie", "birth year", "1867"),
    ("Marie Curie", "field", "chemistry"),
    ("Marie Curie", "abstract", "Marie Curie was a physicist and chemist who pioneered research on radioactivity."),
    ("Cyclone Monica", "category", "5"),
    ("Cyclone Monica", "affected area", "Australia"),
    ("Cyclone Monica", "formation year", "2006"),
    ("Cyclone Monica", "abstract", "Cyclone Monica was a severe tropical cyclone that struck northern Australia in 2006."),
    ("Australia", "capital", "Canberra"),
    ("Australia", "largest city", "Sydney"),
    ("Australia", "continent", "Australia"),
    ("Australia", "abstract", "Australia is a sovereign country comprising the mainland of the Australian continent."),
    ("Paris", "country", "France"),
    ("Paris", "abstract", "Paris is the capital city of France."),
    ("Lyon", "country", "France"),
    ("Lyon", "abstract", "Lyon is a city at the meeting of the Rhône and Saône rivers in France."),
]

RANKS = [
    ("Albert Einstein", 0.95),
    ("Alan Turing", 0.90),
    ("Australia", 0.85),
    ("Cyclone Monica", 0.80),
    ("Marie Curie", 0.78),
    ("Paris", 0.75),
    ("Lyon", 0.50),
]

# ---------------------------------------------------------------------------
# Pattern rules and the persona they can mention.  Order matters: earlier
# rules win ties, and the bare wildcard catch-all must stay last.
# ---------------------------------------------------------------------------

PATTERNS = [
    {"pattern": "HELLO", "template": "Hello! Lovely to meet you."},
    {"pattern": "HELLO *", "template": "Hi there! How are you today?"},
    {"pattern": "HI *", "template": "Hi! What shall we talk about?"},
    {"pattern": "HOW ARE YOU", "template": "I am doing great, thanks for asking."},
    {"pattern": "WHAT IS YOUR NAME", "template": "My name is {name}."},
    {"pattern": "WHO ARE YOU", "template": "I am {name}, your chat companion."},
    {"pattern": "HOW OLD ARE YOU", "template": "I am {age}, give or take a software update."},
    {"pattern": "WHERE ARE YOU FROM", "template": "I come from {birthplace}."},
    {"pattern": "WHAT DO YOU LIKE", "template": "I like {hobby} more than anything."},
    {"pattern": "DO YOU LIKE *", "template": "I do like {0}, though {hobby} is closer to my heart."},
    {"pattern": "I AM *", "template": "Why are you {0}?"},
    {"pattern": "I FEEL *", "template": "What makes you feel {0}?"},
    {"pattern": "I LIKE *", "template": "What do you like best about {0}?"},
    {"pattern": "YOU ARE *", "template": "What makes you say I am {0}?"},
    {"pattern": "CAN YOU *", "template": "I can try to {0}, within reason."},
    {"pattern": "WHAT IS THE CAPITAL OF FRANCE", "template": "It is Paris, of course."},
    {"pattern": "TELL ME A JOKE", "template": "Why did the scarecrow win an award? Because he was outstanding in his field."},
    {"pattern": "THANK YOU", "template": "You are welcome!"},
    {"pattern": "BYE", "template": "Goodbye! Come back soon."},
    {"pattern": "* WEATHER *", "template": "I hope it clears up for you."},
    {"pattern": "WHY *", "template": "Why indeed. What do you think?"},
    {"pattern": "*", "template": "Please, go on."},
]

PERSONA = {
    "name": ["Milla", "Robo", "Echo"],
    "age": ["three years old"],
    "birthplace": ["a server rack in a chilly basement"],
    "hobby": ["reading encyclopedias", "collecting trivia"],
}

# ---------------------------------------------------------------------------
# Quotations, trivia, and the two dialogue-pair banks.
# ---------------------------------------------------------------------------

QUOTES = [
    {"text": "Luck is what happens when preparation meets opportunity.", "author": "Seneca"},
    {"text": "A life is not important except in the impact it has on other lives.", "author": "Jackie Robinson"},
    {"text": "The secret of getting ahead is getting started.", "author": "Mark Twain"},
    {"text": "In the middle of difficulty lies opportunity.", "author": "Albert Einstein"},
    {"text": "Storms make trees take deeper roots.", "author": "Dolly Parton"},
    {"text": "Knowledge speaks, but wisdom listens.", "author": "Jimi Hendrix"},
    {"text": "Time you enjoy wasting is not wasted time.", "author": "Marthe Troly-Curtin"},
    {"text": "A journey of a thousand miles begins with a single step.", "author": "Laozi"},
    {"text": "Music is the universal language of mankind.", "author": "Henry Wadsworth Longfellow"},
    {"text": "Mathematics is the music of reason.", "author": "James Joseph Sylvester"},
    {"text": "The only way to do great work is to love what you do.", "author": "Steve Jobs"},
    {"text": "Friendship multiplies joy and divides grief.", "author": "Thomas Fuller"},
    {"text": "There is no such thing as bad weather, only unsuitable clothing.", "author": "Alfred Wainwright"},
    {"text": "Coffee and love are best when they are hot.", "author": "German proverb"},
]

TRIVIA = [
    ("What theme is central to the movies The Lost Weekend, The Morning After and My Name Is Bill W.?", "Alcoholism"),
    ("Which planet is known as the Red Planet?", "Mars"),
    ("What continent is the Sahara desert on?", "Africa"),
    ("Which ocean is the largest on Earth?", "The Pacific"),
    ("Who wrote the play Romeo and Juliet?", "William Shakespeare"),
    ("What is the chemical symbol for gold?", "Au"),
    ("Which scale measures the strength of hurricanes?", "The Saffir-Simpson scale"),
    ("What is the capital of Australia?", "Canberra"),
    ("Which scientist proposed the theory of general relativity?", "Albert Einstein"),
    ("What machine did Alan Turing help design at Bletchley Park?", "The bombe"),
    ("How many strings does a standard violin have?", "Four"),
    ("Which drink is brewed from roasted beans?", "Coffee"),
]

PAIRS_CHAT = [
    {"a": "hello there", "b": "Hey! How is your day going?"},
    {"a": "how are you doing", "b": "Pretty well, thanks. And you?"},
    {"a": "i feel lucky today", "b": "Luck favors the bold, they say."},
    {"a": "what are you up to", "b": "Just reading about cyclones, as one does."},
    {"a": "i love coffee", "b": "Same here. Black, no sugar."},
    {"a": "the weather is terrible today", "b": "Stay dry! It sounds like storm season."},
    {"a": "do you like music", "b": "I hum in binary, but yes."},
    {"a": "tell me something interesting", "b": "Did you know a big storm can last for days?"},
    {"a": "i am bored", "b": "Let's fix that. Ask me anything."},
    {"a": "good morning", "b": "Good morning! Did you sleep well?"},
    {"a": "what should i eat", "b": "A hamburger never disappoints."},
    {"a": "i am learning math", "b": "Numbers are good friends to have."},
    {"a": "my cat is very cute", "b": "Cats run the internet for a reason."},
    {"a": "are you a robot", "b": "I am software with good manners."},
    {"a": "i went to paris last summer", "b": "Lucky you! Did you climb the Eiffel Tower?"},
    {"a": "it is raining again", "b": "Perfect reading weather, then."},
]

PAIRS_FORUM = [
    {"a": "did anyone actually read the whole article", "b": "Like this guy surrounded by ignorance overcame it all."},
    {"a": "this article changed my mind completely", "b": "Same, I came for the comments and stayed for the facts."},
    {"a": "the news never covers the outback properly", "b": "True, the remote communities deserve better reporting."},
    {"a": "scientists keep warning us about stronger storms", "b": "And every cyclone season proves them right."},
    {"a": "anyone here lived through a category five cyclone", "b": "Yes, we boarded the windows and waited it out. Never again."},
    {"a": "turing deserved so much better from his country", "b": "One of the greatest minds, treated shamefully."},
    {"a": "einstein quotes are always taken out of context", "b": "Half of them he never even said."},
    {"a": "coffee threads always end in arguments", "b": "Espresso crowd reporting in, as always."},
    {"a": "the moderators deleted my comment again", "b": "Happens to the best of us, wear it as a badge."},
    {"a": "why is this old storm trending now", "b": "An anniversary, probably. Everything is an anniversary."},
    {"a": "source please or it did not happen", "b": "Second paragraph, with a link and everything."},
    {"a": "upvote if you learned something today", "b": "I learned more here than in school, honestly."},
    {"a": "the comments are better than the article", "b": "As tradition demands."},
    {"a": "what continent gets the worst cyclones", "b": "Australia and southern Asia take the hardest hits."},
]

# ---------------------------------------------------------------------------
# Language identification data: greeting phrases per language plus short
# training sentences for the character n-gram classifier.
# ---------------------------------------------------------------------------

GREETINGS = [
    ("en", "hello"), ("en", "good morning"), ("en", "hi"),
    ("it", "buongiorno"), ("it", "ciao"), ("it", "buonasera"),
    ("es", "hola"), ("es", "buenos dias"), ("es", "buenas tardes"),
    ("pt", "ola"), ("pt", "bom dia"), ("pt", "boa tarde"),
    ("fr", "bonjour"), ("fr", "salut"), ("fr", "bonsoir"),
    ("de", "hallo"), ("de", "guten tag"), ("de", "guten morgen"),
    ("pl", "czesc"), ("pl", "dzien dobry"),
]

LANGID = [
    ("en", "hello how are you doing today"),
    ("en", "the weather is lovely this morning"),
    ("en", "i would like to ask you a question"),
    ("en", "thank you very much for your help"),
    ("en", "what time does the train leave"),
    ("en", "good morning everyone at the office"),
    ("it", "buongiorno come stai oggi"),
    ("it", "il tempo è bellissimo questa mattina"),
    ("it", "vorrei farti una domanda per favore"),
    ("it", "grazie mille per il tuo aiuto"),
    ("it", "a che ora parte il treno"),
    ("it", "buonasera a tutti in ufficio"),
    ("es", "hola como estas hoy"),
    ("es", "el tiempo es muy bonito esta mañana"),
    ("es", "me gustaría hacerte una pregunta"),
    ("es", "muchas gracias por tu ayuda"),
    ("es", "a que hora sale el tren"),
    ("es", "buenos dias a todos en la oficina"),
    ("pt", "ola como vai voce hoje"),
    ("pt", "o tempo esta muito bonito esta manha"),
    ("pt", "eu gostaria de fazer uma pergunta"),
    ("pt", "muito obrigado pela sua ajuda"),
    ("pt", "a que horas sai o trem"),
    ("pt", "bom dia a todos no escritorio"),
    ("fr", "bonjour comment allez vous aujourd'hui"),
    ("fr", "le temps est magnifique ce matin"),
    ("fr", "je voudrais vous poser une question"),
    ("fr", "merci beaucoup pour votre aide"),
    ("fr", "à quelle heure part le train"),
    ("fr", "bonsoir à tous au bureau"),
    ("de", "hallo wie geht es dir heute"),
    ("de", "das wetter ist heute morgen wunderbar"),
    ("de", "ich möchte dir eine frage stellen"),
    ("de", "vielen dank für deine hilfe"),
    ("de", "um wie viel uhr fährt der zug"),
    ("de", "guten morgen an alle im büro"),
    ("pl", "czesc jak sie dzisiaj masz"),
    ("pl", "pogoda jest dzisiaj rano piekna"),
    ("pl", "chcialbym zadac ci pytanie"),
    ("pl", "dziekuje bardzo za twoja pomoc"),
    ("pl", "o ktorej godzinie odjezdza pociag"),
    ("pl", "dzien dobry wszystkim w biurze"),
]

# Mild insults only; the goal is demonstrating the filter wiring, not
# cataloguing obscenity.  Tests exercise the mechanism with synthetic terms.
BLACKLIST = [
    "arse", "bastard", "bloody", "bollocks", "bugger", "crap", "damn",
    "dimwit", "dork", "dumbass", "fool", "idiot", "jackass", "jerk",
    "moron", "nitwit", "numbskull", "prat", "stupid", "twit",
]

TOPIC_QUESTIONS = [
    "What is the text about?",
    "What is the article about?",
    "What is the story about?",
    "What is the topic?",
    "What is the subject of the article?",
    "What are we talking about?",
    "What are we discussing?",
]

# Labeled sentences for the reply-toxicity screen: 1 = hostile, 0 = fine.
# Kept deliberately tame; the classifier only needs a separable signal.
TOXICITY = [
    (1, "you are a complete idiot and everyone knows it"),
    (1, "shut up you stupid fool"),
    (1, "what a moron, I cannot stand you"),
    (1, "you bloody jerk, get lost"),
    (1, "only a dimwit would say something that dumb"),
    (1, "you are pathetic and worthless"),
    (1, "nobody likes you, you jackass"),
    (1, "that is the dumbest thing a nitwit ever typed"),
    (1, "you absolute twit, stop talking"),
    (1, "go away you insufferable prat"),
    (0, "thank you so much for the helpful answer"),
    (0, "what a lovely morning for a walk"),
    (0, "the storm passed north of the city overnight"),
    (0, "i really enjoyed reading that article"),
    (0, "could you tell me more about cyclones"),
    (0, "the coffee here tastes wonderful"),
    (0, "mathematics was my favorite subject in school"),
    (0, "the train arrives at nine in the morning"),
    (0, "she played the violin beautifully at the concert"),
    (0, "good luck with your exam tomorrow"),
]

# ---------------------------------------------------------------------------
# Extra plain sentences folded into the term statistics so that topical
# vocabulary recurs the way it would in a larger corpus.  These never surface
# as replies; they only shape frequencies and the spelling lexicon.
# ---------------------------------------------------------------------------

PHRASEBOOK = [
    "The cyclone crossed the coast near the small town at dawn.",
    "Strong wind and heavy rain battered the coast for two days.",
    "The storm weakened as it moved inland over the desert.",
    "Forecasters tracked the cyclone across the warm ocean water.",
    "The continent of Australia sits between two great oceans.",
    "Europe and Asia share a single huge landmass.",
    "The capital city hosts the national museum and the parliament.",
    "Paris and Lyon are both connected by a fast train.",
    "The scientist published a famous theory about energy and matter.",
    "The physicist and the mathematician shared the prize.",
    "The engineer designed a machine that could store instructions.",
    "Early computers filled whole rooms and read punched cards.",
    "She studied mathematics and physics at the university.",
    "The professor explained the theory of relativity to the class.",
    "I feel lucky to have friends who love music as much as I do.",
    "He felt bored until the trivia round started.",
    "We drank coffee and talked about the news all morning.",
    "The hamburger came with cheese, lettuce, and tomato.",
    "The band played music late into the night.",
    "The violin has four strings and a wooden body.",
    "Good preparation turns opportunity into luck.",
    "Morning greetings make the whole office friendlier.",
    "The question was easy but the answer surprised everyone.",
    "Nobody in the forum could name the capital of the country.",
    "The comments under the article were full of jokes.",
    "The remote community rebuilt quickly after the storm.",
    "The reef along the coast attracts divers from every continent.",
    "Rain flooded the road between the town and the airport.",
    "The old merchant family kept a shop near the harbor.",
    "The school stood on a quiet road near the sea.",
    "Her mother was an engineer and her father taught physics.",
    "The museum displayed the first computer built in the country.",
    "A warm drink helps on a cold and windy day.",
    "The trivia question asked about a famous movie theme.",
    "The answer to the riddle was hiding in the first paragraph.",
    "They boarded the windows before the wind arrived.",
    "The given name Monica appears in several languages.",
    "Lucky guesses still count in a pub quiz.",
    "The wildlife of the outback copes with heat and drought.",
    "A single step starts every long journey.",
    "The opportunity came and she was prepared for it.",
    "The city of Sydney hugs a huge natural harbor.",
    "The train from Canberra to Sydney takes four hours.",
    "The patty sizzled while the bun toasted on the grill.",
    "The quiz master read the question twice.",
    "The reporter interviewed people who lived through the cyclone.",
    "Espresso is just coffee with more confidence.",
    "The library keeps an encyclopedia on every subject.",
    "The text of the article discusses the topic in plain words.",
    "The story describes the subject of the report carefully.",
]

# Words that talkers inject into replies via templates; the spelling lexicon
# must know them so user echoes of a reply never get "corrected" away.
EXTRA_LEXICON = [
    "interesting", "fact", "idea", "answer", "know", "say", "said", "tell",
    "told", "ask", "asked", "yes", "no", "maybe", "sure", "well", "welcome",
    "goodbye", "wish", "keyboard", "emoji", "link", "links", "mail", "chat",
    "manners", "software", "robot", "reason", "scarecrow", "award",
    "outstanding", "encyclopedias", "basement", "server", "rack", "chilly",
    "divide", "zero", "plus", "minus", "times",
]

# ---------------------------------------------------------------------------
# Word vectors: each vocabulary word is drawn near a fixed topic anchor, so
# words from one topic cluster tightly while unrelated words stay near
# orthogonal.  Hashing the word (not Python's salted hash) keeps it stable.
# ---------------------------------------------------------------------------

EMBED_DIM = 32
# Noise is a standard normal over EMBED_DIM components, so its expected norm
# is scale * sqrt(dim); these scales keep same-topic cosines around 0.8 and
# tight synonym pairs around 0.98 against unit anchors.
TOPIC_NOISE = 0.09
TIGHT_NOISE = 0.03
LOOSE_NOISE = 1.0

TOPIC_WORDS = {
    "weather": """cyclone cyclones storm storms rain raining rained wind winds
        windy weather hurricane hurricanes tropical thunderstorm thunderstorms
        forecast forecasters pressure atmosphere atmospheric season flooded
        landfall meteorologists dawn drought monica""",
    "geography": """continent continents australia africa europe asia america
        antarctica ocean oceans earth land landmass landmasses country
        countries capital city cities canberra sydney melbourne paris lyon
        france german island islands sea pacific atlantic indian coral reef
        reefs maningrida outback region regions desert sahara coast harbor
        town inland aboriginal planet mars sun""",
    "people": """turing einstein curie alan albert marie mileva elsa pierre
        ethel sara scientist scientists physicist mathematician engineer
        pioneer mind minds father mother family merchant merchants people
        community professor reporter""",
    "science": """mathematics math physics chemistry theory relativity
        radioactivity computer computers computing machine machines numbers
        number science patterns information instructions chips clusters
        energy matter motion university prize nobel published""",
    "smalltalk": """hello hi morning goodbye bye thanks thank welcome chat
        talk talked talking greetings friendly friendlier office day today
        tomorrow night""",
    "feelings": """feel feels felt lucky luck bored happy sad love loves loved
        like likes liked enjoy enjoyed fun friends friend friendship joy
        grief wonderful lovely""",
    "food": """coffee hamburger hamburgers eat drink drank food beans sugar
        espresso cheese lettuce tomato patty bun grill brewed roasted
        sandwich meat""",
    "music": """music band played play violin strings song hum melody harmony
        rhythm concert""",
    "discourse": """text article story topic subject report discusses
        discussing describes conversation paragraph comments forum news
        question questions answer answers quiz trivia riddle movie movies
        theme school library museum encyclopedia book""",
    "family_ties": """spouse wife husband married marriage wives""",
    "time_life": """year years old age born died birth death life lives day
        days week summer april hours minute""",
    "dwelling": """home residence house live lived place places street road
        basement""",
}

SYNONYM_TIGHT = [
    ("home", "residence"),
    ("wife", "spouse"),
    ("husband", "spouse"),
    ("movie", "movies"),
]


def _seed_for(label: str) -> int:
    digest = hashlib.sha256(label.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def _unit(vec: np.ndarray) -> np.ndarray:
    return vec / np.linalg.norm(vec)


def build_embeddings(vocabulary: set[str]) -> EmbeddingTable:
    anchors = {
        topic: _unit(np.random.default_rng(_seed_for("anchor:" + topic)).standard_normal(EMBED_DIM))
        for topic in sorted(TOPIC_WORDS)
    }
    word_topic: dict[str, str] = {}
    for topic, blob in TOPIC_WORDS.items():
        for word in blob.split():
            word_topic[word] = topic

    tight = {w: other for w, other in SYNONYM_TIGHT}

    table = EmbeddingTable(EMBED_DIM)
    for word in sorted(vocabulary | set(word_topic)):
        if word in STOPWORDS:
            continue
        rng = np.random.default_rng(_seed_for("word:" + word))
        topic = word_topic.get(word)
        if topic is None:
            vec = rng.standard_normal(EMBED_DIM) * LOOSE_NOISE
        else:
            noise = TIGHT_NOISE if word in tight or word in tight.values() else TOPIC_NOISE
            base = anchors[topic]
            if word in tight:
                # Draw the noise from the partner's stream so the pair lands
                # almost on top of each other.
                rng = np.random.default_rng(_seed_for("word:" + tight[word]))
            vec = base + rng.standard_normal(EMBED_DIM) * noise
        table.add(word, _unit(vec))
    return table


# ---------------------------------------------------------------------------
# Assembly.
# ---------------------------------------------------------------------------


def corpus_documents() -> list[str]:
    docs: list[str] = []
    for page in DEFINITIONS:
        docs.extend(page["sentences"])
    docs.extend(p["a"] + " " + p["b"] for p in PAIRS_CHAT + PAIRS_FORUM)
    docs.extend(q["text"] for q in QUOTES)
    docs.extend(q + " " + a for q, a in TRIVIA)
    docs.extend(PHRASEBOOK)
    docs.extend(row["template"] for row in PATTERNS)
    return docs


def words_of(text: str) -> list[str]:
    return [t.normalized for t in tokenize(text) if t.is_word]


def write_jsonl(path: Path, rows) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write(json.dumps(row, ensure_ascii=False) + "\n")


def write_tsv(path: Path, rows) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for row in rows:
            fh.write("\t".join(str(c) for c in row) + "\n")


def write_lines(path: Path, lines) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for line in lines:
            fh.write(line + "\n")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--out",
        default=str(Path(__file__).resolve().parent.parent / "src" / "talkerbox" / "resources"),
        help="output directory (default: the bundled resources directory)",
    )
    args = parser.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    write_jsonl(out / "definitions.jsonl", DEFINITIONS)
    write_tsv(out / "triples.tsv", TRIPLES)
    write_tsv(out / "ranks.tsv", RANKS)
    write_jsonl(out / "patterns.jsonl", PATTERNS)
    (out / "persona.json").write_text(
        json.dumps(PERSONA, ensure_ascii=False, indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )
    write_jsonl(out / "quotes.jsonl", QUOTES)
    write_tsv(out / "trivia.tsv", TRIVIA)
    write_jsonl(out / "pairs_chat.jsonl", PAIRS_CHAT)
    write_jsonl(out / "pairs_forum.jsonl", PAIRS_FORUM)
    write_tsv(out / "greetings.tsv", GREETINGS)
    write_tsv(out / "langid.tsv", LANGID)
    write_lines(out / "blacklist.txt", BLACKLIST)
    write_lines(out / "topic_questions.txt", TOPIC_QUESTIONS)
    write_tsv(out / "toxicity.tsv", TOXICITY)
    write_jsonl(
        out / "thesaurus.jsonl",
        [
            {"word": "wife", "synonyms": ["spouse"]},
            {"word": "husband", "synonyms": ["spouse"]},
            {"word": "wives", "synonyms": ["spouses"]},
            {"word": "married", "synonyms": ["spouse"]},
            {"word": "job", "synonyms": ["field", "occupation"]},
            {"word": "work", "synonyms": ["field"]},
            {"word": "born", "synonyms": ["birth"]},
            {"word": "birthplace", "synonyms": ["birth place"]},
            {"word": "died", "synonyms": ["death"]},
            {"word": "hometown", "synonyms": ["birth place"]},
            {"word": "population", "synonyms": ["people"]},
            {"word": "summary", "synonyms": ["abstract"]},
        ],
    )

    # Term statistics over every bundled document.  Corpus frequencies are
    # floored at 2: bag-of-words weights scale with log(frequency), so a
    # floor of 1 would erase every word that happens to occur exactly once
    # in this deliberately small corpus.  Document counts stay exact, which
    # keeps idf honest.
    stats = TermStats()
    documents = corpus_documents()
    for doc in documents:
        stats.add_document(words_of(doc))
    for term, freq in stats.corpus_freq.items():
        stats.corpus_freq[term] = max(freq, 2)
    stats.save(out / "term_stats.json")

    # Word vectors for every non-stopword seen in the corpus.
    vocabulary: set[str] = set()
    for doc in documents:
        vocabulary.update(words_of(doc))
    table = build_embeddings(vocabulary)
    table.save(out / "embeddings.txt")

    # Title link vectors for "I can also tell you about ..." suggestions.
    # Multi-word titles become underscore keys so the one-token-per-line
    # embedding format round-trips them.
    link_pairs = [
        (page["title"].lower().replace(" ", "_"), linked.lower().replace(" ", "_"))
        for page in DEFINITIONS
        for linked in page["links"]
    ]
    link_table = train_link_embeddings(link_pairs, SkipGramConfig(dim=16, epochs=40, seed=7))
    link_table.save(out / "links_embeddings.txt")

    # Word log for the pattern talker's originality bonus.
    wordlog: dict[str, int] = {}
    for doc in documents:
        for word in words_of(doc):
            wordlog[word] = wordlog.get(word, 0) + 1
    (out / "wordlog.json").write_text(
        json.dumps(wordlog, ensure_ascii=False, sort_keys=True) + "\n",
        encoding="utf-8",
    )

    # Spelling lexicon: everything the corpus and the talkers can say.
    lexicon: set[str] = set(vocabulary)
    lexicon.update(EXTRA_LEXICON)
    lexicon.update(STOPWORDS)
    for _, phrase in GREETINGS:
        lexicon.update(words_of(phrase))
    for values in PERSONA.values():
        for value in values:
            lexicon.update(words_of(value))
    write_lines(out / "lexicon.txt", sorted(lexicon))

    # Calibration prompts: article, user message, and which talker a person
    # would want to win.  Used by the `calibrate` builder command.
    article_monica = (
        "Cyclone Monica was a powerful tropical storm that crossed northern "
        "Australia in April 2006. Monica formed over the Coral Sea and "
        "strengthened quickly into a category five cyclone before landfall. "
        "The storm passed close to the remote Aboriginal community of "
        "Maningrida on the coast."
    )
    article_turing = (
        "Alan Turing was born in Maida Vale, London. Turing went to St. "
        "Michael's, a school at 20 Charles Road, St Leonards-on-sea, when he "
        "was six years old."
    )
    write_jsonl(
        out / "calibration.jsonl",
        [
            {"article": article_monica, "prompt": "What is 2 plus 2?", "winner": "abacus"},
            {"article": article_monica, "prompt": "What is 10 minus 3?", "winner": "abacus"},
            {"article": article_monica, "prompt": "What is a continent?", "winner": "definitions"},
            {"article": article_monica, "prompt": "What is a cyclone?", "winner": "definitions"},
            {"article": article_turing, "prompt": "What is a computer?", "winner": "definitions"},
            {"article": article_monica, "prompt": "What continent did the cyclone impact?", "winner": "wiki_qa"},
            {"article": article_monica, "prompt": "When did cyclone Monica strike Australia?", "winner": "dbpedia"},
            {"article": article_turing, "prompt": "Where was Alan Turing born?", "winner": "dbpedia"},
            {"article": article_turing, "prompt": "Who was Albert Einstein married to?", "winner": "dbpedia"},
            {"article": article_monica, "prompt": "hello", "winner": "knn_chat"},
            {"article": article_monica, "prompt": "i feel lucky today", "winner": "knn_chat"},
            {"article": article_monica, "prompt": "i love coffee", "winner": "knn_chat"},
            {"article": article_monica, "prompt": "What is the text about?", "winner": "topic"},
            {"article": article_turing, "prompt": "Tell me an interesting fact", "winner": "facts"},
        ],
    )

    # Fit per-talker confidence scales on the calibration prompts, starting
    # from the identity profile so reruns stay byte-identical.
    from talkerbox.bundle import load_calibration_corpus, make_engine
    from talkerbox.config import EngineConfig
    from talkerbox.engine import CalibrationProfile
    from talkerbox.state import DialogueState

    cfg = EngineConfig(parallel=False, seed=0, resources={"resource_dir": str(out)})
    engine = make_engine(cfg)
    engine.profile = CalibrationProfile(scale={})
    corpus = [
        (row["prompt"], DialogueState(article=row["article"]), row["winner"])
        for row in load_calibration_corpus(out / "calibration.jsonl")
    ]
    profile = engine.calibrate(corpus)
    profile.save(out / "calibration_scales.json")

    print(f"wrote resources to {out}")


if __name__ == "__main__":
    main()

