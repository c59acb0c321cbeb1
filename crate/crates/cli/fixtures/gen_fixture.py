"""Builds the bundled experiment fixture.

Writes topics, a URL list with an HTML mirror, a 50-document target
collection with judgments, and the experiment config. The snapshot is then
produced by the tool itself:

    python3 gen_fixture.py
    cargo run -p qexpand-cli -- fetch --config crates/cli/fixtures/config.toml

Relevant collection documents share vocabulary with the web pages of their
topic while often lacking the title words; decoys repeat the title words in
an unrelated context.
"""

import json
import random
import shutil
from pathlib import Path

SEED = 7
HERE = Path(__file__).resolve().parent
ENGINES = ["google", "bing", "duckduckgo"]
PAGES_PER_TOPIC = 32
RESULTS_PER_ENGINE = 20

TOPICS = {
    "201": ("life water space", """
        mars europa ocean ice microbes habitable planet moon nasa astrobiology rover orbit
        telescope enceladus subsurface liquid organisms atmosphere crater geyser probe
        mission biosignature extraterrestrial frozen saturn jupiter titan methane
        hydrothermal vents exoplanet kepler spectroscopy sediment mineral evidence"""),
    "202": ("india budget", """
        finance minister fiscal deficit tax parliament rupees crore allocation expenditure
        revenue gst subsidy infrastructure defence railways welfare rural farmers economy
        growth sitharaman sabha capital spending borrowing disinvestment income slab
        exemption customs duty schemes outlay treasury reforms delhi"""),
    "203": ("solar energy storage", """
        battery lithium photovoltaic grid inverter panels renewable capacity megawatt
        kilowatt charge discharge cells silicon efficiency utility rooftop installation
        thermal molten salt pumped hydro electricity peak demand tesla powerwall ion
        backup sunlight module wafer watt generation"""),
    "204": ("coffee health effects", """
        caffeine cardiovascular antioxidants blood pressure heart study cancer liver
        diabetes consumption cups daily sleep anxiety metabolism brew espresso polyphenols
        mortality researchers participants cohort decaf arabica beans insomnia stimulant
        alertness dementia parkinson cholesterol stroke dose withdrawal"""),
    "205": ("volcano eruption forecast", """
        magma seismic lava ash plume tremor monitoring sensors deformation gas sulfur
        dioxide observatory volcanologists evacuation hazard pyroclastic caldera earthquake
        swarm satellite etna kilauea vesuvius pinatubo alert warning predict probability
        slope dome vent explosive stratovolcano lahar tephra geologists"""),
}

FILLER = """
    article page news information read share comment website update story today week
    month local national group team work plan public service system program data result
    issue level change people city world history family school market company market
    office record member control effort support review project question answer reason
    country region area street house building morning evening weekend holiday travel
    photo video image gallery author editor column opinion guide tips list series
    subscribe newsletter account login contact privacy terms policy cookie advert
    network channel media press release statement interview event conference meeting
    official agency department board council committee union league club sport football
    cricket music film movie book album concert festival garden kitchen recipe dinner
""".split()


def words(block):
    return block.split()


def sentence(rng, vocab, n):
    return " ".join(rng.choice(vocab) for _ in range(n)).capitalize() + "."


def web_page(rng, title_words, pool, quality):
    """Paragraphs mixing topic vocabulary (share `quality`) with filler."""
    paras = []
    for _ in range(rng.randint(3, 5)):
        toks = []
        for _ in range(rng.randint(14, 22)):
            r = rng.random()
            if r < 0.12:
                toks.append(rng.choice(title_words))
            elif r < 0.12 + quality:
                toks.append(rng.choice(pool))
            else:
                toks.append(rng.choice(FILLER))
        paras.append(" ".join(toks).capitalize() + ".")
    return paras


def html_page(title, paras):
    body = "\n".join(f"    <p>{p}</p>" for p in paras)
    return f"""<!DOCTYPE html>
<html>
<head><meta charset="utf-8"><title>{title}</title></head>
<body>
  <nav><a href="/">Home</a> <a href="/about">About</a> <a href="/contact">Contact</a></nav>
  <article>
    <h1>{title}</h1>
{body}
  </article>
  <footer>Copyright example media. All rights reserved.</footer>
</body>
</html>
"""


def build_web(rng):
    mirror = HERE / "mirror"
    if mirror.exists():
        shutil.rmtree(mirror)
    url_lines = ["# query_id\tengine\trank\turl"]
    for qid, (title, pool_text) in TOPICS.items():
        title_words, pool = title.split(), words(pool_text)
        urls = []
        for p in range(PAGES_PER_TOPIC):
            host = f"www.site{rng.randint(1, 60)}.example"
            path = f"/{qid}/page-{p + 1}.html"
            urls.append(f"https://{host}{path}")
            quality = 0.75 - 0.4 * p / PAGES_PER_TOPIC
            paras = web_page(rng, title_words, pool, quality)
            heading = " ".join(rng.sample(pool, 3)).title()
            target = mirror / host / path.lstrip("/")
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_text(html_page(heading, paras))
        for engine in ENGINES:
            # Engines agree on the best pages but order them differently.
            order = sorted(range(PAGES_PER_TOPIC), key=lambda i: i + rng.uniform(0, 12))
            for rank, i in enumerate(order[:RESULTS_PER_ENGINE], start=1):
                url_lines.append(f"{qid}\t{engine}\t{rank}\t{urls[i]}")
    (HERE / "urls.tsv").write_text("\n".join(url_lines) + "\n")


def build_collection(rng):
    docs, qrels = [], []
    counter = iter(range(1, 1000))

    def add(text, qid=None, grade=None):
        doc_id = f"D{next(counter):03d}"
        docs.append({"doc_id": doc_id, "text": text})
        if qid is not None:
            qrels.append(f"{qid} 0 {doc_id} {grade}")

    topic_ids = list(TOPICS)
    for idx, (qid, (title, pool_text)) in enumerate(TOPICS.items()):
        title_words, pool = title.split(), words(pool_text)
        other = words(TOPICS[topic_ids[(idx + 1) % len(topic_ids)]][1])
        # Relevant, with every title word.
        add(" ".join([title] + [sentence(rng, pool + FILLER, 12) for _ in range(3)]), qid, 1)
        # Relevant, topic vocabulary with at most one title word.
        for j in range(3):
            lead = [rng.choice(title_words)] if j == 0 else []
            add(" ".join(lead + [sentence(rng, pool, 10) for _ in range(2)] + [sentence(rng, FILLER, 8)]), qid, 1)
        # Decoys: title words in an unrelated context.
        for _ in range(2):
            add(" ".join([title, title] + [sentence(rng, other + FILLER, 12) for _ in range(2)]), qid, 0)
        # One title word among filler.
        for _ in range(2):
            add(" ".join([rng.choice(title_words)] + [sentence(rng, FILLER, 12) for _ in range(2)]), qid, 0)
    while len(docs) < 50:
        add(" ".join(sentence(rng, FILLER, 12) for _ in range(3)))

    order = list(range(len(docs)))
    rng.shuffle(order)
    with open(HERE / "collection.jsonl", "w") as f:
        for i in order:
            f.write(json.dumps(docs[i]) + "\n")
    (HERE / "qrels.txt").write_text("\n".join(sorted(qrels)) + "\n")


def main():
    rng = random.Random(SEED)
    (HERE / "topics.tsv").write_text("".join(f"{q}\t{t}\n" for q, (t, _) in TOPICS.items()))
    build_web(rng)
    build_collection(rng)


if __name__ == "__main__":
    main()
