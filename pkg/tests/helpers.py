"""Small random schemas and rules shared by the property tests."""

import random

from rulescope.rdf import TriplePattern, lit, uri, var
from rulescope.rules import Rule, validate_rule
from rulescope.schema import TriplestoreSchema

URIS = [uri(":a"), uri(":b")]
PREDS = [uri(":p"), uri(":q")]
LITS = [lit("x")]


def random_schema(rng, max_patterns=3, prefix="s"):
    counter = iter(range(1000))

    def fresh():
        return var(f"{prefix}{next(counter)}")

    pats = []
    for _ in range(rng.randint(1, max_patterns)):
        s = rng.choice(URIS) if rng.random() < 0.3 else fresh()
        p = rng.choice(PREDS) if rng.random() < 0.8 else fresh()
        o = rng.choice(URIS + LITS) if rng.random() < 0.3 else fresh()
        pats.append(TriplePattern(s, p, o))
    forced = {t for tp in pats for t in tp[:2] if t.is_var}
    extra = {tp[2] for tp in pats if tp[2].is_var and rng.random() < 0.4}
    return TriplestoreSchema(pats, forced | extra, strict=True)


def random_rule(rng, name="r", max_ante=2):
    vs = [var("a"), var("b"), var("c")]
    while True:
        ante = []
        for _ in range(rng.randint(1, max_ante)):
            s = rng.choice(vs + URIS[:1])
            p = rng.choice(PREDS) if rng.random() < 0.8 else rng.choice(vs)
            o = rng.choice(vs + URIS + LITS)
            ante.append(TriplePattern(s, p, o))
        avars = sorted({t for tp in ante for t in tp if t.is_var})
        if not avars:
            continue
        rng.shuffle(avars)
        pool = avars[:3] + [uri(":c")]
        terms = [rng.choice(pool) for _ in range(3)]
        if terms[1].is_var and rng.random() < 0.5:
            terms[1] = rng.choice(PREDS)
        try:
            r = Rule(name, ante, [TriplePattern(*terms)])
        except ValueError:
            continue
        if not validate_rule(r):
            return r


def random_case(seed):
    rng = random.Random(seed)
    return random_schema(rng), random_rule(rng)
