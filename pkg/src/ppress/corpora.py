"""Deterministic sample-corpus generators, one per benchmark category.

The toolkit needs desk-scale stand-ins for the eight dataset categories the
benchmark reports cover (encyclopedic, code, math word problems, clinical
notes, web reviews, science Q&A, long-form narrative, research abstracts)
plus a schema-comment corpus of the TPC-H flavour for the mutual-information
contrast.  Everything is template text drawn from fixed word pools with a
seeded RNG: regenerating with the same (category, seed, size) is
byte-identical, which keeps benchmark results reproducible without shipping
large files.

These are statistical stand-ins, not real corpora: sentence statistics are
tuned so byte entropy, word/char entropy ordering, and dictionary-compressor
ratios land in the ranges typical of English prose.
"""

from __future__ import annotations

import random

# --- shared word pools -------------------------------------------------------

GIVEN_NAMES = (
    "Alice Marcus Elena Viktor Sofia Daniel Ingrid Tomas Clara Henrik Maria "
    "Oskar Lena Pavel Anna Jorge Nadia Felix Irene Hugo Alma Stefan Greta "
    "Rolf Petra Anton Livia Bruno Celia Mateo Dora Emil Frida Gustav Hanna "
    "Ivan Janna Karl Lotte Milan Nora Otto Paula Quentin Rosa Samuel Tilda "
    "Ulrik Vera Walter Yvonne Zara Albert Beatrice Casimir Delia Edmund"
).split()

SURNAMES = (
    "Halvorsen Brandt Okafor Lindqvist Moreau Castellanos Whitfield Pedersen "
    "Yamamoto Kovacs Ferreira Novak Olsson Marchetti Devereux Johansson "
    "Antonov Beaumont Cardoso Dimitrov Eriksen Fontaine Grigore Hoffmann "
    "Ishikawa Jankovic Kaplan Lombardi Mercer Nakamura Ostrowski Petrova "
    "Quintero Rasmussen Sorensen Takahashi Ulloa Vasquez Weiss Xenakis "
    "Ziegler Ashworth Bergstrom Calloway Drummond Ellington Fairbanks "
    "Galloway Hathaway Iverson Kingsley Lockwood Merriweather Northcote"
).split()

PLACES = (
    "Valdria Norholm Eastbrook Kettering Maravelle Southmere Dunharrow "
    "Westfall Arkenport Lindenvale Carrowood Felsmark Graniteford Halloway "
    "Ironbridge Juniper-Crossing Kestrelmoor Larkspur Middenvale Northgate "
    "Oakhurst Pellamy Quarrystone Ridgemont Silvershore Thornbury Umberfield "
    "Vantage-Point Willowmere Yarrowdale Zephyr-Bay Ashford Blackmoor "
    "Coldwater Driftwood Elmsworth Fernhill Glasswater Hartledge"
).split()

NOUNS = (
    "settlement river valley museum railway bridge festival council harbor "
    "university cathedral district library observatory foundry market "
    "province archive theatre garrison monastery aqueduct parliament quarry "
    "vineyard lighthouse expedition treaty census dynasty rebellion reform "
    "charter plague famine harvest migration currency fortress chapel "
    "canal turbine reservoir junction terminus academy institute society "
    "journal manuscript inscription artifact excavation monument boundary "
    "population economy industry agriculture commerce textile pottery "
    "climate rainfall plateau escarpment basin tributary delta confluence "
    "specimen mineral deposit stratum fossil sediment glacier moraine"
).split()

ADJECTIVES = (
    "ancient notable prominent substantial gradual rapid extensive modest "
    "coastal inland northern southern eastern western central peripheral "
    "agricultural industrial ceremonial administrative provincial municipal "
    "medieval colonial modern contemporary historic prosperous declining "
    "fortified abandoned restored celebrated disputed documented seasonal "
    "navigable fertile arid temperate humid volcanic sedimentary limestone "
    "distinctive characteristic remarkable unusual conventional traditional"
).split()

VERBS_PAST = (
    "established founded constructed expanded rebuilt demolished restored "
    "documented surveyed annexed governed administered cultivated exported "
    "imported produced manufactured traded fortified besieged abandoned "
    "resettled incorporated chartered mapped excavated catalogued preserved "
    "flooded drained irrigated connected linked served supplied powered"
).split()

CONNECTIVES = (
    "However, Meanwhile, Subsequently, In addition, By contrast, Nevertheless, "
    "As a result, During this period, According to contemporary records, "
    "In later years, Despite these changes, Around the same time,"
).split(", ")


def _weighted(rng: random.Random, pool) -> str:
    """Zipf-flavoured pick: early pool entries appear much more often."""
    n = len(pool)
    r = rng.random()
    idx = int(n * r * r)
    return pool[idx if idx < n else n - 1]


def _sentence_case(text: str) -> str:
    return text[0].upper() + text[1:]


class _Gen:
    def __init__(self, seed: int):
        self.rng = random.Random(seed)

    def pick(self, pool):
        return self.rng.choice(pool)

    def zipf(self, pool):
        return _weighted(self.rng, pool)

    def year(self):
        return str(self.rng.randint(1421, 2019))

    def num(self, lo=2, hi=9500):
        return str(self.rng.randint(lo, hi))

    def pct(self):
        return f"{self.rng.randint(1, 97)}.{self.rng.randint(0, 9)}%"


def _alt(rng: random.Random, *options: str) -> str:
    return options[rng.randrange(len(options))]


def wiki(seed: int = 0, target_bytes: int = 120_000) -> str:
    """Encyclopedic prose: dated facts about invented places and people.

    Scaffolding words rotate through synonym pools so that surface phrases
    rarely repeat verbatim; dictionary compressors then see this text the
    way they see real encyclopedic prose (ratios in the 2.5-4.5 band)
    instead of exploiting template boilerplate.
    """
    g = _Gen(seed ^ 0x5715)
    rng = g.rng
    out = []
    size = 0
    ref = 1
    while size < target_bytes:
        place = g.pick(PLACES)
        noun = g.pick(NOUNS)
        # the coordinate line carries the digit density of real gazetteers
        lat = f"{rng.randint(34, 68)}.{rng.randint(1000, 9999)}"
        lon = f"{rng.randint(0, 41)}.{rng.randint(1000, 9999)}"
        para = [
            f"== {place} {noun.capitalize()} ==\n"
            f"({lat} N, {lon} {_alt(rng, 'E', 'W')}; elevation {g.num(1, 2400)} m; "
            f"area {g.num(1, 900)}.{rng.randint(0, 99):02d} km2)\n"
        ]
        n_sentences = rng.randint(4, 9)
        for _ in range(n_sentences):
            t = rng.randrange(10)
            if t == 0:
                s = (f"The {g.pick(ADJECTIVES)} {g.pick(NOUNS)} "
                     f"{_alt(rng, 'of', 'at', 'near', 'serving')} {place} was "
                     f"{g.pick(VERBS_PAST)} {_alt(rng, 'in', 'around', 'by', 'during')} "
                     f"{g.year()} and {g.pick(VERBS_PAST)} "
                     f"{_alt(rng, 'again in', 'once more in', 'a second time in', 'following the storms of')} "
                     f"{g.year()}.")
            elif t == 1:
                s = (f"{g.pick(GIVEN_NAMES)} {g.pick(SURNAMES)}, "
                     f"{_alt(rng, 'a', 'once a', 'remembered as a', 'long considered the most')} "
                     f"{g.pick(ADJECTIVES)} "
                     f"{_alt(rng, 'figure', 'landowner', 'magistrate', 'engineer', 'merchant', 'scholar')} "
                     f"{_alt(rng, 'of the region', 'in local accounts', 'of the period', 'among the settlers')}, "
                     f"{g.pick(VERBS_PAST)} the {g.pick(NOUNS)} "
                     f"{_alt(rng, 'that now bears the family name', 'still standing today', 'later lost to fire', 'recorded in the ' + g.year() + ' survey')}.")
            elif t == 2:
                s = (f"{_alt(rng, 'By', 'Around', 'After', 'Toward')} {g.year()} the "
                     f"{g.pick(NOUNS)} "
                     f"{_alt(rng, 'supported', 'sustained', 'counted', 'housed', 'employed')} "
                     f"{_alt(rng, 'a population of about', 'nearly', 'some', 'more than', 'an estimated')} "
                     f"{g.num(400, 90000)}, "
                     f"{_alt(rng, 'of whom roughly', 'with about', 'of which', 'where perhaps')} "
                     f"{g.pct()} "
                     f"{_alt(rng, 'worked in', 'depended on', 'traded through', 'drew wages from')} "
                     f"the {g.pick(NOUNS)} trade.")
            elif t == 3:
                s = (f"{g.pick(CONNECTIVES)} the {g.pick(ADJECTIVES)} {g.pick(NOUNS)} was "
                     f"{g.pick(VERBS_PAST)} "
                     f"{_alt(rng, 'to serve', 'to relieve', 'to replace', 'alongside', 'despite')} "
                     f"the {_alt(rng, 'growing', 'older', 'ruined', 'original', 'neighbouring')} "
                     f"{g.pick(NOUNS)}.")
            elif t == 4:
                s = (f"The {g.pick(NOUNS)} "
                     f"{_alt(rng, 'lies', 'sits', 'stands', 'extends')} "
                     f"{g.num(2, 140)} "
                     f"{_alt(rng, 'kilometres', 'km', 'miles', 'leagues')} "
                     f"{_alt(rng, 'from', 'off', 'above', 'beyond')} the "
                     f"{g.pick(ADJECTIVES)} "
                     f"{_alt(rng, 'coast', 'frontier', 'plain', 'uplands', 'marshes')}, "
                     f"{_alt(rng, 'near', 'close to', 'within sight of', 'downstream of')} "
                     f"the {g.pick(NOUNS)} "
                     f"{_alt(rng, 'of', 'at', 'shared with')} {g.pick(PLACES)}.")
            elif t == 5:
                s = (f"{_alt(rng, 'A', 'One', 'Another', 'The last')} "
                     f"{g.pick(ADJECTIVES)} {g.pick(NOUNS)}, {g.pick(VERBS_PAST)} in "
                     f"{g.year()}, "
                     f"{_alt(rng, 'remains one of the oldest in the province', 'survives only as foundations', 'was moved stone by stone in ' + g.year(), 'still operates each spring', 'appears on the earliest maps')}.")
            elif t == 6:
                s = (f"{_alt(rng, 'Records from', 'A chronicle of', 'Tax rolls of', 'Letters dated', 'An inventory from')} "
                     f"{g.year()} "
                     f"{_alt(rng, 'describe how', 'note that', 'suggest that', 'confirm that', 'omit whether')} "
                     f"the {g.pick(NOUNS)} was {g.pick(VERBS_PAST)} "
                     f"{_alt(rng, 'after', 'before', 'during', 'in response to')} the "
                     f"{g.pick(ADJECTIVES)} {g.pick(NOUNS)} of {g.year()}.")
            elif t == 7:
                s = (f"{_alt(rng, 'Its', 'The', 'A restored', 'The adjoining')} "
                     f"{g.pick(ADJECTIVES)} {g.pick(NOUNS)} "
                     f"{_alt(rng, 'attracted', 'drew', 'received', 'admitted')} "
                     f"{g.num(50, 20000)} "
                     f"{_alt(rng, 'visitors', 'pilgrims', 'traders', 'students')} in "
                     f"{g.year()}, "
                     f"{_alt(rng, 'a rise of', 'up', 'an increase of', 'growth of')} "
                     f"{g.pct()} "
                     f"{_alt(rng, 'over the previous decade', 'on the prior count', 'since the last census', 'year on year')}.")
            elif t == 8:
                s = (f"{_alt(rng, 'Local historians', 'Later surveys', 'Most sources', 'Regional gazetteers', 'Competing accounts')} "
                     f"{_alt(rng, 'attribute', 'credit', 'assign', 'trace')} the "
                     f"{g.pick(ADJECTIVES)} {g.pick(NOUNS)} to "
                     f"{g.pick(GIVEN_NAMES)} {g.pick(SURNAMES)}, "
                     f"{_alt(rng, 'though the claim is disputed', 'citing the ' + g.year() + ' charter', 'without firm evidence', 'on stylistic grounds')}.")
            else:
                s = (f"{_alt(rng, 'Flooding in', 'A fire in', 'The drought of', 'An earthquake in', 'The winter of')} "
                     f"{g.year()} "
                     f"{_alt(rng, 'destroyed', 'damaged', 'spared', 'isolated', 'silted up')} "
                     f"{_alt(rng, 'much of', 'part of', 'nearly all of', 'the eastern half of')} "
                     f"the {g.pick(NOUNS)}, "
                     f"{_alt(rng, 'which was not', 'and it was only later', 'after which it was', 'and within ' + g.num(2, 30) + ' years it was')} "
                     f"{g.pick(VERBS_PAST)}.")
            if rng.random() < 0.35:
                s += f"[{ref}]"
                ref += rng.randint(1, 3)
            para.append(s)
        text = para[0] + " ".join(para[1:]) + "\n\n"
        out.append(text)
        size += len(text)
    return "".join(out)


def article(seed: int = 0, target_bytes: int = 90_000) -> str:
    """Research-abstract prose."""
    g = _Gen(seed ^ 0xA27C)
    rng = g.rng
    topics = ("sediment transport membrane filtration crop rotation signal "
              "attenuation protein folding urban drainage soil compaction "
              "wave propagation catalyst degradation thermal storage").split()
    methods = ("regression analysis finite element simulation controlled field "
               "trials spectroscopic measurement longitudinal sampling Monte "
               "Carlo estimation comparative assay batch experiments").split()
    out = []
    size = 0
    while size < target_bytes:
        t1, t2 = g.pick(topics), g.pick(topics)
        m = g.pick(methods)
        sents = [
            f"Abstract {g.num(1, 999)}.",
            f"We study the influence of {t1} on {t2} using {m} and {g.pick(methods)}.",
            f"A cohort of {g.num(12, 400)} samples was evaluated over "
            f"{g.num(3, 48)} months, with {g.pct()} meeting the inclusion criteria.",
            f"The observed effect size of {g.pct()} exceeds previously reported "
            f"estimates by a factor of {g.num(2, 7)}.",
            f"Our results indicate that {t1} is {g.zipf(ADJECTIVES)} and interacts "
            f"with {t2} under {g.zipf(ADJECTIVES)} conditions.",
            f"These findings suggest directions for further work on {g.pick(topics)}.",
        ]
        rng.shuffle(sents)
        text = " ".join(sents) + "\n\n"
        out.append(text)
        size += len(text)
    return "".join(out)


def code(seed: int = 0, target_bytes: int = 90_000) -> str:
    """Source-code flavoured text: small functions with varied identifiers."""
    g = _Gen(seed ^ 0xC0DE)
    rng = g.rng
    prefixes = "get set load parse merge filter count apply build emit".split()
    stems = ("record buffer index token packet widget column header value "
             "segment channel vertex matrix payload cursor").split()
    out = []
    size = 0
    while size < target_bytes:
        fn = f"{g.pick(prefixes)}_{g.pick(stems)}"
        arg1, arg2 = g.pick(stems), g.pick(stems)
        v1, v2 = g.pick(stems), g.pick(stems)
        lines = [
            f"def {fn}({arg1}, {arg2}={g.num(0, 64)}):",
            f"    \"\"\"{_sentence_case(g.pick(prefixes))} the {arg1} into {v1} chunks.\"\"\"",
            f"    {v1} = []",
            f"    for i, {v2} in enumerate({arg1}):",
            f"        if {v2}.size > {g.num(1, 4096)}:",
            f"            {v1}.append({v2}.slice(i, i + {arg2}))",
            f"        else:",
            f"            {v1}.append({v2})",
            f"    return {v1}",
            "",
            "",
        ]
        text = "\n".join(lines)
        out.append(text)
        size += len(text)
    return "".join(out)


def math(seed: int = 0, target_bytes: int = 90_000) -> str:
    """Grade-school word problems with worked answers."""
    g = _Gen(seed ^ 0x3A7B)
    rng = g.rng
    names = GIVEN_NAMES
    items = ("apples pencils marbles stickers tickets ribbons baskets coins "
             "books crates oranges buttons stamps cards shells").split()
    out = []
    size = 0
    while size < target_bytes:
        a, b = rng.randint(3, 96), rng.randint(2, 48)
        c = rng.randint(2, 12)
        who, who2 = g.pick(names), g.pick(names)
        item = g.pick(items)
        kind = rng.randrange(3)
        if kind == 0:
            total = a + b
            text = (f"Problem: {who} has {a} {item} and {who2} gives them {b} more. "
                    f"How many {item} does {who} have now?\n"
                    f"Answer: {who} starts with {a} {item}. Adding the {b} from "
                    f"{who2} gives {a} + {b} = {total}. The answer is {total}.\n\n")
        elif kind == 1:
            total = a * c
            text = (f"Problem: {who} packs {c} boxes with {a} {item} in each box. "
                    f"How many {item} are packed in total?\n"
                    f"Answer: Each box holds {a} {item}, so {c} boxes hold "
                    f"{a} x {c} = {total}. The answer is {total}.\n\n")
        else:
            total = a * c + b
            text = (f"Problem: {who} sells {item} in bundles of {a}. After selling "
                    f"{c} bundles and {b} loose {item}, how many were sold?\n"
                    f"Answer: The bundles account for {a} x {c} = {a * c} {item}, "
                    f"plus {b} loose makes {a * c} + {b} = {total}. "
                    f"The answer is {total}.\n\n")
        out.append(text)
        size += len(text)
    return "".join(out)


def clinical(seed: int = 0, target_bytes: int = 90_000) -> str:
    """Discharge-summary styled notes."""
    g = _Gen(seed ^ 0xC11)
    rng = g.rng
    complaints = ("chest discomfort,persistent cough,lower back pain,"
                  "intermittent fever,ankle swelling,abdominal cramping,"
                  "shortness of breath,recurrent headaches,blurred vision,"
                  "joint stiffness").split(",")
    meds = ("lisinopril,metformin,atorvastatin,omeprazole,amlodipine,"
            "levothyroxine,albuterol,gabapentin,sertraline,ibuprofen").split(",")
    out = []
    size = 0
    note_id = 1000 + g.rng.randint(0, 999)
    while size < target_bytes:
        age = rng.randint(19, 94)
        sex = rng.choice(["male", "female"])
        c = g.pick(complaints)
        m1, m2 = g.pick(meds), g.pick(meds)
        bp = f"{rng.randint(98, 182)}/{rng.randint(54, 104)}"
        hr = rng.randint(52, 128)
        days = rng.randint(1, 14)
        text = (
            f"Note {note_id}. "
            f"{_alt(rng, 'Patient is a', 'This is a', 'The patient, a', 'A')} "
            f"{age}-year-old {sex} "
            f"{_alt(rng, 'admitted with', 'presenting with', 'seen for', 'who reported', 'transferred for evaluation of')} "
            f"{c} of {rng.randint(1, 21)} days "
            f"{_alt(rng, 'duration', 'standing', 'onset', 'history')}. "
            f"{_alt(rng, 'Vital signs on admission:', 'On arrival, vitals were', 'Initial examination recorded', 'Triage noted')} "
            f"blood pressure {bp} mmHg, "
            f"{_alt(rng, 'heart rate', 'pulse')} {hr} bpm, "
            f"{_alt(rng, 'temperature', 'temp')} {rng.randint(361, 392) / 10:.1f} C. "
            f"{_alt(rng, 'Laboratory studies were notable for', 'Labs showed', 'Bloodwork revealed', 'Panels returned', 'Chemistries demonstrated')} "
            f"a white cell count of {rng.randint(38, 162) / 10:.1f} and "
            f"{_alt(rng, 'creatinine', 'a creatinine level')} of "
            f"{rng.randint(6, 24) / 10:.1f}. "
            f"{_alt(rng, 'The patient was started on', 'Treatment began with', 'We initiated', 'Therapy included')} "
            f"{m1} "
            f"{_alt(rng, 'and continued on home', 'alongside home', 'with continuation of', 'plus maintenance')} "
            f"{m2}. "
            f"{_alt(rng, 'Symptoms improved over', 'The course settled within', 'Recovery followed over', 'Findings resolved across')} "
            f"{days} days and the patient was "
            f"{_alt(rng, 'discharged in stable condition', 'released home', 'discharged to outpatient care', 'sent home in good condition')} "
            f"with follow-up in {rng.randint(1, 8)} weeks.\n\n"
        )
        note_id += rng.randint(1, 7)
        out.append(text)
        size += len(text)
    return "".join(out)


def web(seed: int = 0, target_bytes: int = 90_000) -> str:
    """Movie-review styled prose."""
    g = _Gen(seed ^ 0xEB)
    rng = g.rng
    films = [f"{a} {b}" for a, b in zip(
        "Silent Crimson Hollow Endless Broken Golden Savage Quiet Burning Last".split(),
        "Harbor Meridian Orchard Causeway Lantern Divide Parallel Monsoon Archive Ferry".split(),
    )]
    aspects = ("pacing,dialogue,cinematography,score,editing,casting,"
               "production design,screenplay,sound mixing").split(",")
    moods = ("tense,uneven,luminous,predictable,restrained,bloated,"
             "affecting,meandering,assured,hollow").split(",")
    out = []
    size = 0
    while size < target_bytes:
        film = g.pick(films)
        a1, a2 = g.pick(aspects), g.pick(aspects)
        m1, m2 = g.pick(moods), g.pick(moods)
        stars = rng.randint(1, 5)
        text = (
            f"Review: {film} ({g.year()}). Rating: {stars}/5. "
            f"The {a1} is {m1}, and for long stretches the film coasts on its "
            f"{m2} {a2}. {g.pick(GIVEN_NAMES)} {g.pick(SURNAMES)} delivers a "
            f"{g.pick(moods)} lead performance that the {g.pick(aspects)} rarely "
            f"earns. At {rng.randint(84, 178)} minutes it is "
            f"{'worth the ticket' if stars >= 3 else 'hard to recommend'}, though "
            f"the final act nearly {'redeems' if stars >= 3 else 'sinks'} it.\n\n"
        )
        out.append(text)
        size += len(text)
    return "".join(out)


def science(seed: int = 0, target_bytes: int = 90_000) -> str:
    """Physics problem/solution pairs."""
    g = _Gen(seed ^ 0x5C1)
    rng = g.rng
    out = []
    size = 0
    while size < target_bytes:
        m = rng.randint(2, 50)
        v = rng.randint(2, 40)
        d = rng.randint(5, 500)
        kind = rng.randrange(3)
        if kind == 0:
            e = m * v * v // 2
            text = (f"Q: A cart of mass {m} kg moves at {v} m/s. "
                    f"What is its kinetic energy?\n"
                    f"A: Kinetic energy equals one half times mass times velocity "
                    f"squared, so E = 0.5 x {m} x {v}^2 = {e} J.\n\n")
        elif kind == 1:
            t = d / v
            text = (f"Q: A signal travels {d} km at {v} km/s. How long does the "
                    f"journey take?\n"
                    f"A: Time equals distance over speed, so t = {d} / {v} = "
                    f"{t:.2f} s.\n\n")
        else:
            f_ = m * v
            text = (f"Q: A body of mass {m} kg accelerates at {v} m/s^2. "
                    f"What net force acts on it?\n"
                    f"A: Force equals mass times acceleration, therefore "
                    f"F = {m} x {v} = {f_} N.\n\n")
        out.append(text)
        size += len(text)
    return "".join(out)


def novel(seed: int = 0, target_bytes: int = 90_000) -> str:
    """Long-form travel narrative."""
    g = _Gen(seed ^ 0x40E1)
    rng = g.rng
    weather = ("a thin rain,low fog,hard sunlight,a cold wind,dust,"
               "the first snow,heat,drizzle").split(",")
    out = []
    size = 0
    day = 1
    while size < target_bytes:
        place = g.pick(PLACES)
        w = g.pick(weather)
        who = g.pick(GIVEN_NAMES)
        text = (
            f"Day {day}. We reached {place} under {w}, the road from "
            f"{g.pick(PLACES)} having taken {rng.randint(2, 11)} hours longer "
            f"than promised. {who} bargained for rooms above the "
            f"{g.zipf(NOUNS)} while I walked the {g.zipf(ADJECTIVES)} streets "
            f"down to the {g.zipf(NOUNS)}. An old keeper told us the "
            f"{g.zipf(NOUNS)} had been {g.pick(VERBS_PAST)} twice, once after "
            f"the {g.zipf(NOUNS)} of {g.year()}, and showed us marks on the "
            f"stone to prove it. We ate {g.zipf(NOUNS)} soup and slept badly; "
            f"tomorrow the {g.zipf(ADJECTIVES)} pass, if the weather holds.\n\n"
        )
        day += rng.randint(1, 3)
        out.append(text)
        size += len(text)
    return "".join(out)


def tpch_comments(seed: int = 0, target_bytes: int = 90_000) -> str:
    """Schema-comment word salad: small vocabulary, no sentence structure.

    Mimics the comment fields of classic database benchmark tables, which
    are drawn nearly independently from a tiny word list; adjacent words
    carry almost no information about each other.
    """
    rng = random.Random(seed ^ 0x79C4)
    vocab = (
        "furiously quickly slyly carefully blithely express deposits accounts "
        "requests instructions packages theodolites foxes ideas pinto beans "
        "dependencies platelets asymptotes courts dolphins multipliers "
        "sometimes final bold regular special pending unusual even ironic "
        "silent daring sleep haggle nag wake cajole boost detect integrate "
        "above among against along across around behind beside beyond near "
        "the a of to in on at after before never always"
    ).split()
    out = []
    size = 0
    while size < target_bytes:
        n = rng.randint(6, 14)
        words = [vocab[int(len(vocab) * rng.random() ** 1.5)] for _ in range(n)]
        text = " ".join(words) + ". "
        if rng.random() < 0.12:
            text += "\n"
        out.append(text)
        size += len(text)
    return "".join(out)


#: category name -> (generator, natural-language flag)
CATEGORIES = {
    "wiki": (wiki, True),
    "code": (code, False),
    "math": (math, True),
    "clinical": (clinical, True),
    "web": (web, True),
    "science": (science, True),
    "novel": (novel, True),
    "article": (article, True),
    "tpch": (tpch_comments, False),
}


def generate(category: str, seed: int = 0, target_bytes: int = 90_000) -> str:
    try:
        gen, _ = CATEGORIES[category]
    except KeyError:
        raise KeyError(f"unknown corpus category {category!r}; "
                       f"known: {', '.join(sorted(CATEGORIES))}")
    return gen(seed=seed, target_bytes=target_bytes)


def natural_language_categories() -> list[str]:
    return [name for name, (_, natural) in CATEGORIES.items() if natural]
