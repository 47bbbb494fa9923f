"""Acceptance suite. Each test covers one release criterion at its stated
tolerance and prints a PASS line; run with -s (or read captured output)
for the per-criterion report."""

import json
import random
import string
import time
from pathlib import Path

from _oracles import brute_force_match
from conftest import GOLDEN_DIR
from graphqa.chunker import annotate
from graphqa.docgraph import emit_xml, expand_possessive, parse_xml
from graphqa.graphstore import GraphStore
from graphqa.matcher import WH_CONSTRAINTS, answer
from graphqa.normalize import normalize
from graphqa.pipeline import analyze_document, analyze_query, annotate_text
from graphqa.roles import RoleFiller, RoleUnit, WhType, split_conjunctive, unit_text
from graphqa.tagger import db_tag, ner_tag, pos_tag, tokenize

from test_graphstore import _product_size, random_pattern, random_store


def _report(name: str):
    print(f"ACCEPTANCE PASS: {name}")


# ------------------------------------------------- worked-example suite --

def test_worked_examples(lexicon, patterns, corpus_store):
    started = time.monotonic()

    # John's Brother killed Ram -> (John)-[has a]->(Brother)-[killed]->(Ram)
    doc = analyze_document("John's Brother killed Ram.", 0, lexicon, patterns)
    triples = {(e.src_label, e.relation, e.dst_label) for e in doc.delta.edges}
    assert triples == {
        ("John", "has a", "Brother"),
        ("Brother", "killed", "Ram"),
    }
    assert {n.label for n in doc.delta.nodes} == {"John", "Brother", "Ram"}

    # Statement of Ram on Shyam's killing by Ravi -> main + DUMMY sub-unit
    qa = analyze_query("Statement of Ram on Shyam's killing by Ravi",
                       lexicon, patterns)
    assert len(qa.trees) == 1
    tree = qa.trees[0]
    assert len(tree.subs) == 1
    assert tree.main.agent.surface == "Ram"
    assert tree.main.relation.surface == "statement"
    assert tree.main.acted_upon_phrase == tree.subs[0].unit_id
    sub = tree.subs[0]
    assert sub.acted_upon.surface == "Shyam"
    assert sub.relation.surface == "killing"
    assert sub.agent.surface == "Ravi"

    # pronoun replacement
    sentences, _ = annotate_text("Ram's visit and his statement", lexicon)
    assert sentences[0].text == "Ram's visit and Ram's statement"

    # conjunctive separation: exactly 4 unit queries
    sents, _ = annotate_text("statement and visit of Ram and Sita", lexicon)
    units = split_conjunctive(sents[0])
    assert len(units) == 4
    assert {unit_text(u.phrases) for u in units} == {
        "statement of Ram", "statement of Sita",
        "visit of Ram", "visit of Sita",
    }

    # Fig-5 style question over the fixture corpus: complete patient set
    result = answer("Who was criticized by Lalu Yadav?",
                    corpus_store, lexicon, patterns)
    assert {a.label for a in result.answers} == {
        "Nitish Kumar", "Sushil Modi", "Ram Vilas Paswan"}
    assert result.highlight
    for eid in result.highlight:
        edge = corpus_store.edges[eid]
        assert edge.relation == "criticized"
        assert corpus_store.nodes[edge.src].label == "Lalu Yadav"

    elapsed = time.monotonic() - started
    assert elapsed < 5.0, f"worked-example suite took {elapsed:.2f}s"
    _report(f"worked-example suite (exact, {elapsed:.2f}s < 5s)")


# ---------------------------------------------------- wh-table soundness --

_PERSONS = ["Ram", "Sita", "Lalu Yadav", "Mary Kom", "Ravi", "Shyam",
            "Nitish Kumar", "Anushka Sharma"]
_PLACES = ["Delhi", "Pune", "Patna", "Agra", "Mumbai", "Goa"]
_DATES = ["2018-01-05", "2019-03-12", "2021", "2017-12"]
_TIMES = ["19:00", "07:30"]
_NUMEX = ["450 runs", "6 medals", "500 rupees"]
_OTHER = ["statement", "festival", "concert", "lamps"]
_RELS = ["criticized", "met", "visited", "scored", "paid", "arrived",
         "went", "born", "defeated"]

_TEMPLATES = [
    "Who was criticized by {p}?",
    "Who met {p}?",
    "Whom did {p} meet?",
    "Whom did {p} defeat?",
    "Where did {p} go?",
    "Where did {p} visit?",
    "Which place did {p} visit?",
    "When did {p} visit {q}?",
    "When was {p} born?",
    "What time did {p} arrive?",
    "How many runs did {p} score?",
    "How much did {p} pay?",
]


def _soundness_store(rng: random.Random) -> GraphStore:
    """Adversarial store: labels and NE types combined at random, so a
    type-unsound matcher would surface wrongly-typed answers."""
    store = GraphStore()
    labels = _PERSONS + _PLACES + _DATES + _TIMES + _NUMEX + _OTHER
    types = [None, "PERSON", "LOCATION", "ORGANIZATION", "DATE", "TIME", "NUMEX"]
    ids = []
    for _ in range(rng.randint(4, 16)):
        ids.append(store.upsert_node(rng.choice(labels), rng.choice(types)))
    ids = sorted(set(ids))
    for _ in range(rng.randint(3, 28)):
        store.add_edge(rng.choice(ids), rng.choice(ids), rng.choice(_RELS),
                       "AVerb", rng.randint(0, 4), rng.randint(0, 4))
    return store


def test_wh_table_soundness(lexicon, patterns):
    rng = random.Random(9041)
    violations = 0
    trials = 1000
    for _ in range(trials):
        store = _soundness_store(rng)
        template = rng.choice(_TEMPLATES)
        question = template.format(p=rng.choice(_PERSONS + _PLACES),
                                   q=rng.choice(_PLACES))
        result = answer(question, store, lexicon, patterns)
        allowed = WH_CONSTRAINTS.get(result.wh)
        if allowed is None:
            continue
        for a in result.answers:
            if a.ne_type not in allowed:
                violations += 1
                print("VIOLATION", question, a)
    assert violations == 0
    _report(f"wh-table soundness ({trials} randomized trials, 0 violations)")


# -------------------------------------------------------- matcher oracle --

def test_matcher_equals_brute_force_oracle():
    rng = random.Random(771177)
    started = time.monotonic()
    trials = 0
    discrepancies = 0
    while trials < 1000:
        store = random_store(rng, max_nodes=50, max_edges=120)
        pattern = random_pattern(rng, store, max_vars=4)
        if _product_size(store, pattern) > 40000:
            continue
        trials += 1
        got = {tuple(sorted(b.assignment.items())) for b in store.match(pattern)}
        want = {tuple(sorted(a.items()))
                for a in brute_force_match(store, pattern)}
        if got != want:
            discrepancies += 1
            print("DISCREPANCY", pattern, got ^ want)
    elapsed = time.monotonic() - started
    assert discrepancies == 0
    assert elapsed < 60.0, f"oracle suite took {elapsed:.2f}s"
    _report(f"matcher vs brute-force oracle (1000 graphs, 0 discrepancies, "
            f"{elapsed:.1f}s < 60s)")


# ---------------------------------------------------- pipeline invariants --

_CHARS = string.ascii_letters + string.digits + " .,!?*@#-'/:()\n"


def test_invariant_normalization_idempotent():
    rng = random.Random(11)
    for _ in range(500):
        text = "".join(rng.choice(_CHARS)
                       for _ in range(rng.randint(0, 80)))
        once = normalize(text)
        twice = normalize(once.text)
        assert twice.text == once.text
        assert twice.sentence_spans == once.sentence_spans
        assert twice.datetime_spans == once.datetime_spans
    _report("normalization idempotence (500 cases)")


_WORDS = ["Lalu", "Yadav", "statement", "of", "New", "Delhi", "leader",
          "senior", "spoke", "the", "brother", "Ram", "'s", "450", "runs",
          "visited", "and", "by", "in", "Sita"]


def test_invariant_phrase_partition(lexicon):
    rng = random.Random(12)
    for _ in range(500):
        text = " ".join(rng.choice(_WORDS)
                        for _ in range(rng.randint(1, 12)))
        toks = tokenize(text)
        if not toks:
            continue
        pos_tag(toks, lexicon)
        ner_tag(toks, lexicon)
        db_tag(toks, lexicon)
        sent = annotate(text, toks, lexicon)
        flat = [id(t) for ph in sent.phrases for t in ph.tokens]
        assert flat == [id(t) for t in toks]
    _report("phrase-partition property (500 cases)")


def test_invariant_conjunction_cardinality(lexicon):
    rng = random.Random(13)
    concepts = ["statement", "visit", "meeting", "criticism"]
    entities = ["Ram", "Sita", "Shyam", "Ravi"]
    for _ in range(500):
        k = rng.randint(1, 4)
        m = rng.randint(1, 4)
        text = (" and ".join(rng.sample(concepts, k))
                + " of " + " and ".join(rng.sample(entities, m)))
        sentences, _ = annotate_text(text, lexicon)
        units = split_conjunctive(sentences[0])
        assert len(units) == max(1, k * m), text
    _report("conjunction cardinality k*m (500 cases)")


def test_invariant_possessive_chain_length():
    rng = random.Random(14)
    parts_pool = ["Ram", "John", "brother", "friend", "leader", "Sita"]
    for _ in range(500):
        parts = [rng.choice(parts_pool) for _ in range(rng.randint(1, 6))]
        label = "'s ".join(parts)
        nodes, edges = expand_possessive(label)
        markers = label.count("'s")
        assert len(nodes) == markers + 1
        assert len(edges) == markers
    _report("possessive chain length n+1 (500 cases)")


def _random_filler(rng: random.Random):
    if rng.random() < 0.25:
        return None
    return RoleFiller(
        surface=rng.choice(["Ram", "Sita", "John's Brother", "Delhi",
                            "450 runs", "leader", "2018-01-05"]),
        ne_type=rng.choice([None, "PERSON", "LOCATION", "ORGANIZATION",
                            "DATE", "TIME", "NUMEX"]),
        attributes=tuple(sorted(rng.sample(
            ["senior", "political", "famous"], rng.randint(0, 2)))),
    )


def test_invariant_xml_round_trip():
    rng = random.Random(15)
    for _ in range(500):
        units = []
        for i in range(rng.randint(0, 4)):
            units.append(RoleUnit(
                unit_id=f"u{i}",
                doc_id=23,
                sentence_index=rng.randint(0, 5),
                relation=RoleFiller(rng.choice(
                    ["killed", "met", "statement", "is", "criticized"])),
                relation_class=rng.choice(
                    ["AVerb", "PVerb", "Copula", "Concept"]),
                agent=_random_filler(rng),
                acted_upon=_random_filler(rng),
                place_source=_random_filler(rng),
                place_dest=_random_filler(rng),
                time=_random_filler(rng),
                agent_phrase=rng.choice([None, "u8.d1"]),
                acted_upon_phrase=rng.choice([None, "u8.d2"]),
                low_confidence=rng.random() < 0.3,
            ))
        xml = emit_xml(units, [], doc_id=23)
        _, parsed, _ = parse_xml(xml)
        key = lambda u: (u.sentence_index, u.unit_id)
        assert sorted(parsed, key=key) == sorted(units, key=key)
    _report("XML round-trip field equality (500 cases)")


def test_invariant_store_round_trip(tmp_path):
    rng = random.Random(16)
    path = tmp_path / "roundtrip.graph"
    for _ in range(500):
        store = random_store(rng, max_nodes=40, max_edges=80)
        store.save(path)
        loaded = GraphStore.load(path)
        assert len(loaded.nodes) == len(store.nodes)
        assert len(loaded.edges) == len(store.edges)
        for nid, n in store.nodes.items():
            m = loaded.nodes[nid]
            assert (m.label, m.ne_type, m.attributes) == \
                (n.label, n.ne_type, n.attributes)
        for eid, e in store.edges.items():
            assert loaded.edges[eid] == e
    _report("store save/load isomorphism (500 cases)")


# ------------------------------------------------------ fixture-corpus QA --

def test_fixture_corpus_golden_qa(corpus_store, lexicon, patterns):
    golden = json.loads(
        (GOLDEN_DIR / "qa_golden.json").read_text(encoding="utf-8"))
    assert len(golden) >= 60
    mismatches = []
    for entry in golden:
        result = answer(entry["question"], corpus_store, lexicon, patterns)
        got = {
            "wh": result.wh.value,
            "answers": sorted(
                [{"label": a.label, "doc": a.doc_id, "sent": a.sentence_index}
                 for a in result.answers], key=lambda d: d["label"]),
        }
        want = {"wh": entry["wh"], "answers": entry["answers"]}
        if got != want:
            mismatches.append((entry["question"], got, want))
    for q, got, want in mismatches:
        print("GOLDEN MISMATCH", q, "\n got:", got, "\n want:", want)
    assert not mismatches
    _report(f"fixture-corpus QA ({len(golden)} questions, 100% golden match)")


def test_fixture_corpus_ingest_stats(corpus_analyses, corpus_store):
    golden = json.loads(
        (GOLDEN_DIR / "ingest_stats.json").read_text(encoding="utf-8"))
    assert len(corpus_analyses) == len(golden["docs"])
    assert len(corpus_store.nodes) == golden["total_nodes"]
    assert len(corpus_store.edges) == golden["total_edges"]
    for analysis, want in zip(corpus_analyses, golden["docs"]):
        assert len(analysis.sentences) == want["sentences"]
        assert len(analysis.units) == want["units"]
        assert analysis.unresolved_pronouns == want["unresolved_pronouns"]
    _report("fixture-corpus ingest statistics match golden")
