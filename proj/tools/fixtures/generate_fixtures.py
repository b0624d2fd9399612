#!/usr/bin/env python3
"""Generate the offline DraCor snapshot used by the fixture backend.

The snapshot is synthetic: corpus sizes, character totals, year ranges and the
handful of named plays are pinned to the values the evaluation bundle depends
on; everything else is filled in from a seeded RNG so the output is byte-stable.

Usage: generate_fixtures.py <repo-root>
Writes <repo-root>/fixtures/dracor and <repo-root>/tests/data/mini_fixtures.
"""

import hashlib
import json
import math
import random
import shutil
import sys
import unicodedata
from pathlib import Path

import networkx as nx

BASE_URL = "https://dracor.org/api/v1"
RECORDED_AT = "2025-07-14T12:00:00Z"
REGISTRY_URL = "https://raw.githubusercontent.com/dracor-org/dracor-registry/main/corpora.json"
RESEARCH_URL = "https://raw.githubusercontent.com/dracor-org/dracor-frontend/main/public/doc/research.md"

UNRESERVED = set("ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789-._~")


def fnv1a64(data: bytes) -> int:
    h = 0xCBF29CE484222325
    for b in data:
        h ^= b
        h = (h * 0x100000001B3) & 0xFFFFFFFFFFFFFFFF
    return h


def percent_encode(s: str) -> str:
    out = []
    for b in s.encode("utf-8"):
        c = chr(b)
        out.append(c if c in UNRESERVED else "%%%02X" % b)
    return "".join(out)


def fixture_key(target: str) -> str:
    """Mirror of dracor::api::fixture_key in core/src/fixture_backend.cpp."""
    for scheme in ("https://", "http://"):
        if target.startswith(scheme):
            target = target[len(scheme):]
            break
    else:
        if not target.startswith("/"):
            target = "/" + target
    path, _, query = target.partition("?")
    key = percent_encode(path)
    if query:
        key += "__%016x" % fnv1a64(query.encode("utf-8"))
    return key + ".json"


def slugify(text: str) -> str:
    for a, b in (("ä", "ae"), ("ö", "oe"), ("ü", "ue"), ("Ä", "ae"), ("Ö", "oe"), ("Ü", "ue"), ("ß", "ss")):
        text = text.replace(a, b)
    text = "".join(c for c in unicodedata.normalize("NFD", text) if unicodedata.category(c) != "Mn")
    out = []
    for c in text.lower():
        out.append(c if c.isascii() and c.isalnum() else "-")
    slug = "-".join(p for p in "".join(out).split("-") if p)
    return slug


def r6(x: float) -> float:
    return round(x, 6)


class Snapshot:
    def __init__(self, root: Path):
        self.root = root
        if root.exists():
            shutil.rmtree(root)
        root.mkdir(parents=True)
        self.entries = []

    def put(self, target: str, body, content_type="application/json"):
        if isinstance(body, (dict, list)):
            text = json.dumps(body, ensure_ascii=False, sort_keys=True, separators=(",", ":"))
        else:
            text = body
        name = fixture_key(target)
        data = text.encode("utf-8")
        (self.root / name).write_bytes(data)
        self.entries.append({
            "target": target,
            "file": name,
            "status": 200,
            "content_type": content_type,
            "recorded_at": RECORDED_AT,
            "bytes": len(data),
            "sha256": hashlib.sha256(data).hexdigest(),
        })
        return len(text)

    def finish(self, note):
        manifest = {
            "format_version": 1,
            "base_url": BASE_URL,
            "recorded_at": RECORDED_AT,
            "note": note,
            "entries": sorted(self.entries, key=lambda e: e["target"]),
        }
        (self.root / "manifest.json").write_text(
            json.dumps(manifest, ensure_ascii=False, sort_keys=True, indent=1) + "\n", encoding="utf-8")


# ---------------------------------------------------------------------------
# corpus definitions

# name, acronym, title, plays, characters, year_min, year_max, language pool
CORPORA = [
    ("als", "AlsDraCor", "Alsatian Drama Corpus", 30, 438, 1816, 1938, "ger"),
    ("arm", "ArmDraCor", "Armenian Drama Corpus", 22, 341, 1860, 1935, "gen"),
    ("bash", "BashDraCor", "Bashkir Drama Corpus", 9, 118, 1926, 1973, "gen"),
    ("bel", "BelDraCor", "Belarusian Drama Corpus", 18, 263, 1907, 1958, "gen"),
    ("cal", "CalDraCor", "Calderón Drama Corpus", 80, 1784, 1623, 1681, "spa"),
    ("cz", "CzDraCor", "Czech Drama Corpus", 25, 377, 1820, 1931, "gen"),
    ("dutch", "DutchDraCor", "Dutch Drama Corpus", 40, 712, 1617, 1879, "gen"),
    ("eng", "EngDraCor", "English Drama Corpus", 60, 1493, 1565, 1899, "eng"),
    ("fre", "FreDraCor", "French Drama Corpus", 1560, 14336, 1160, 2007, "fre"),
    ("ger", "GerDraCor", "German Drama Corpus", 737, 16214, 1510, 1940, "ger"),
    ("gersh", "GerShDraCor", "German Shakespeare Drama Corpus", 38, 1497, 1762, 1832, "ger"),
    ("greek", "GreekDraCor", "Greek Drama Corpus", 39, 431, -458, -388, "gen"),
    ("hrv", "HrvDraCor", "Croatian Drama Corpus", 20, 296, 1550, 1910, "gen"),
    ("hun", "HunDraCor", "Hungarian Drama Corpus", 30, 467, 1795, 1930, "gen"),
    ("ita", "ItaDraCor", "Italian Drama Corpus", 157, 2604, 1524, 1937, "ita"),
    ("lat", "LatDraCor", "Neo-Latin Drama Corpus", 24, 402, 1450, 1750, "gen"),
    ("pol", "PolDraCor", "Polish Drama Corpus", 40, 811, 1795, 1933, "gen"),
    ("rom", "RomDraCor", "Roman Drama Corpus", 36, 379, -254, 65, "gen"),
    ("rus", "RusDraCor", "Russian Drama Corpus", 212, 4217, 1747, 1940, "gen"),
    ("shake", "ShakeDraCor", "Shakespeare Drama Corpus", 37, 1271, 1590, 1613, "eng"),
    ("slv", "SlvDraCor", "Slovenian Drama Corpus", 16, 221, 1790, 1925, "gen"),
    ("span", "SpanDraCor", "Spanish Drama Corpus", 50, 907, 1496, 1931, "spa"),
    ("swe", "SweDraCor", "Swedish Drama Corpus", 68, 1172, 1725, 1913, "swe"),
    ("tat", "TatDraCor", "Tatar Drama Corpus", 8, 94, 1908, 1957, "gen"),
    ("ukr", "UkrDraCor", "Ukrainian Drama Corpus", 35, 604, 1819, 1930, "gen"),
    ("yid", "YidDraCor", "Yiddish Drama Corpus", 7, 88, 1880, 1929, "gen"),
]

SMALL_CORPORA = {"bash", "tat", "yid"}

POOLS = {
    "ger": {
        "first_m": ["Johann", "Friedrich", "Karl", "Heinrich", "Ludwig", "August", "Christian", "Wilhelm", "Jakob", "Ernst"],
        "first_f": ["Luise", "Charlotte", "Marie", "Sophie", "Johanna", "Elise", "Amalie"],
        "last": ["Müller", "Weiße", "Schröder", "Körner", "Grün", "Hebbel", "Kotzebue", "Iffland", "Gellert", "Krüger",
                 "Raupach", "Ayrenhoff", "Brühl", "Stephanie", "Bäuerle", "Nestroy", "Töpfer", "Holtei", "Schönthan", "Fulda"],
        "head": ["Der", "Die", "Das"],
        "noun": ["Liebe", "Hof", "Bürger", "Räuber", "Kaufmann", "Schwur", "Müllerin", "Fürst", "Garten", "Brüder",
                 "Heimkehr", "Freiheit", "Treue", "Wald", "Tochter", "Wirt", "Schuld", "Erbe", "Schloss", "Jäger", "Glück",
                 "König", "Gräfin", "Ehre", "Verschwörung", "Mündel", "Spieler", "Hagestolz", "Strickerin", "Vormund"],
        "genre": ["Ein Trauerspiel in fünf Aufzügen", "Ein Lustspiel in drei Akten", "Schauspiel in vier Aufzügen",
                  "Posse mit Gesang", "Ein bürgerliches Trauerspiel", "Dramatisches Gedicht"],
    },
    "fre": {
        "first_m": ["Jean", "Pierre", "Louis", "Jacques", "François", "Antoine", "Charles", "Étienne", "Honoré", "Eugène"],
        "first_f": ["Marie", "Jeanne", "Françoise", "Marguerite", "Catherine", "Adélaïde"],
        "last": ["Dancourt", "Regnard", "Marivaux", "Scribe", "Favart", "Dufresny", "Boursault", "Legrand", "Collé",
                 "Sedaine", "Piron", "Lesage", "Destouches", "Hauteroche", "Quinault", "Pradon", "Crébillon", "Labiche",
                 "Feydeau", "Augier", "Dumanoir", "Pixérécourt", "Théaulon", "Désaugiers"],
        "head": ["Le", "La", "Les"],
        "noun": ["Mariage", "Époux", "Amant", "Héritier", "Fête", "Coquette", "Médecin", "Rendez-vous", "Procès",
                 "Joueur", "Méprise", "Tuteur", "Bourgeoise", "Épreuve", "Veuve", "Soupçon", "Métromanie", "Chevalier",
                 "Retour", "Fausse Agnès", "Café", "Vendange", "Oracle", "Billet"],
        "genre": ["Comédie en un acte", "Comédie en cinq actes et en vers", "Tragédie en cinq actes",
                  "Vaudeville en un acte", "Opéra-comique en trois actes", "Drame en prose"],
    },
    "ita": {
        "first_m": ["Carlo", "Pietro", "Giovanni", "Vittorio", "Francesco", "Giuseppe", "Alessandro"],
        "first_f": ["Luisa", "Elisabetta", "Teresa", "Giulia"],
        "last": ["Goldoni", "Alfieri", "Metastasio", "Gozzi", "Chiari", "Maffei", "Monti", "Niccolini", "Giacosa",
                 "Bracco", "Verga", "Ferrari", "Pellico", "Cossa"],
        "head": ["Il", "La", "Lo"],
        "noun": ["Locandiera", "Bugiardo", "Ventaglio", "Servitore", "Famiglia", "Congiura", "Vedova", "Cortigiana",
                 "Raggiro", "Avaro", "Villeggiatura", "Tutore", "Rusteghi", "Pettegolezzi"],
        "genre": ["Commedia in tre atti", "Tragedia in cinque atti", "Dramma in quattro atti", "Commedia in prosa"],
    },
    "swe": {
        "first_m": ["Carl", "Johan", "August", "Gustaf", "Frans", "Olof"],
        "first_f": ["Anne", "Frida", "Victoria", "Alfhild", "Mathilda", "Hedvig"],
        "last": ["Strindberg", "Dalin", "Kellgren", "Edgren", "Benedictsson", "Agrell", "Leffler", "Hedberg",
                 "Blanche", "Jolin", "Börjesson", "Lenngren"],
        "head": ["Den", "Det", "En"],
        "noun": ["Fadren", "Bröllopet", "Fästmön", "Fröken", "Handskarna", "Skådespelerskan", "Väktaren", "Arvtagaren",
                 "Högfärden", "Gästen", "Hemligheten", "Fiskarstugan"],
        "genre": ["Skådespel i tre akter", "Lustspel i en akt", "Sorgespel i fem akter", "Komedi i två akter"],
    },
    "eng": {
        "first_m": ["William", "John", "Thomas", "George", "Richard", "Henry"],
        "first_f": ["Aphra", "Susanna", "Hannah", "Elizabeth", "Joanna"],
        "last": ["Marlowe", "Jonson", "Dekker", "Middleton", "Webster", "Congreve", "Sheridan", "Goldsmith",
                 "Behn", "Centlivre", "Cowley", "Inchbald", "Wilde", "Pinero"],
        "head": ["The"],
        "noun": ["Rover", "Busybody", "Rivals", "Duchess", "Alchemist", "Changeling", "Way of the World", "Critic",
                 "Wonder", "Belle's Stratagem", "Masque", "Tempest", "Merchant", "Heiress"],
        "genre": ["A Comedy in Five Acts", "A Tragedy", "A Farce in Two Acts", "A Tragicomedy"],
    },
    "spa": {
        "first_m": ["Pedro", "Lope", "Tirso", "Agustín", "Francisco", "Leandro"],
        "first_f": ["Ana", "María", "Gertrudis"],
        "last": ["Calderón", "Moreto", "Rojas", "Zorrilla", "Moratín", "Bretón", "Echegaray", "Benavente", "Solís",
                 "Cubillo", "Matos", "Vélez"],
        "head": ["El", "La", "Los"],
        "noun": ["Alcalde", "Médico", "Vida", "Dama", "Galán", "Mágico", "Príncipe", "Secreto", "Desdén",
                 "Castigo", "Purgatorio", "Pintor"],
        "genre": ["Comedia famosa", "Auto sacramental", "Drama en tres actos", "Zarzuela"],
    },
    "gen": {
        "first_m": ["Ivan", "Nikolai", "Mihai", "Józef", "Arsen", "Gabdulla", "Marko", "Karel", "Pavel", "Licinius"],
        "first_f": ["Lesya", "Zinaida", "Maria", "Olga", "Gabriela"],
        "last": ["Ostrovsky", "Fonvizin", "Sumarokov", "Gogol", "Katona", "Madách", "Fredro", "Słowacki", "Tukay",
                 "Karim", "Tyl", "Držić", "Linhart", "Kupala", "Sundukian", "Plautus", "Terentius", "Gordin",
                 "Kotliarevsky", "Kvitka", "Euripides", "Aristophanes", "Menander", "Bidermann"],
        "head": ["The"],
        "noun": ["Storm", "Forest", "Minor", "Inspector", "Bride", "Wedding", "Merchant", "Peasant", "Exile",
                 "Orphan", "Widow", "Feast", "Voyage", "Captive", "Twins", "Harvest", "Oath"],
        "genre": ["Drama in four acts", "Comedy in three acts", "Tragedy", "Comedy in verse"],
    },
}

GENRES = ["Comedy", "Tragedy", "Libretto", None]


# ---------------------------------------------------------------------------
# pinned plays


def emilia_cast():
    # id, name, gender
    return [
        ("emilia", "Emilia Galotti", "FEMALE"),
        ("odoardo", "Odoardo Galotti", "MALE"),
        ("claudia", "Claudia Galotti", "FEMALE"),
        ("der_prinz", "Hettore Gonzaga, Prinz von Guastalla", "MALE"),
        ("marinelli", "Marinelli", "MALE"),
        ("camillo_rota", "Camillo Rota", "MALE"),
        ("conti", "Conti", "MALE"),
        ("appiani", "Graf Appiani", "MALE"),
        ("orsina", "Gräfin Orsina", "FEMALE"),
        ("angelo", "Angelo", "MALE"),
        ("pirro", "Pirro", "MALE"),
        ("battista", "Battista", "MALE"),
        ("kammerdiener", "Ein Kammerdiener", "MALE"),
    ]


def dantons_cast(rng):
    named = [
        ("danton", "Georg Danton", "MALE"), ("julie", "Julie", "FEMALE"), ("lacroix", "Lacroix", "MALE"),
        ("camille", "Camille Desmoulins", "MALE"), ("lucile", "Lucile", "FEMALE"), ("herault", "Hérault-Séchelles", "MALE"),
        ("philippeau", "Philippeau", "MALE"), ("legendre", "Legendre", "MALE"), ("robespierre", "Robespierre", "MALE"),
        ("st_just", "St. Just", "MALE"), ("barere", "Barère", "MALE"), ("collot", "Collot d'Herbois", "MALE"),
        ("billaud", "Billaud-Varennes", "MALE"), ("paris", "Paris", "MALE"), ("mercier", "Mercier", "MALE"),
        ("thomas_payne", "Thomas Payne", "MALE"), ("chaumette", "Chaumette", "MALE"), ("dillon", "Dillon", "MALE"),
        ("fouquier", "Fouquier-Tinville", "MALE"), ("simon", "Simon", "MALE"), ("simons_weib", "Simons Weib", "FEMALE"),
        ("marion", "Marion", "FEMALE"), ("rosalie", "Rosalie", "FEMALE"), ("adelaide", "Adelaide", "FEMALE"),
        ("lafflotte", "Lafflotte", "MALE"), ("amar", "Amar", "MALE"), ("vouland", "Vouland", "MALE"),
        ("herrmann", "Herrmann", "MALE"), ("laflotte", "Laflotte", "MALE"),
    ]
    cast = list(named)
    i = 1
    while len(cast) < 103:
        kind = rng.choice(["buerger", "buergerin", "soldat", "weib", "deputierter", "stimme", "henker", "kerkermeister"])
        gender = {"buergerin": "FEMALE", "weib": "FEMALE", "stimme": "UNKNOWN"}.get(kind, "MALE")
        cast.append((f"{kind}_{i}", f"{kind.capitalize()} {i}", gender))
        i += 1
    return cast


def generic_cast(rng, n, female, male, prefix="person"):
    genders = ["FEMALE"] * female + ["MALE"] * male + ["UNKNOWN"] * (n - female - male)
    rng.shuffle(genders)
    return [(f"{prefix}_{i + 1}", f"{prefix.capitalize()} {i + 1}", g) for i, g in enumerate(genders)]


def nollhart_cast():
    names = ["Nollhart", "Der Papst", "Der Kaiser", "Der König von Frankreich", "Der Venediger", "Der Schweizer",
             "Der Landsknecht", "Der Bauer", "Der Jude", "Die Begine", "Der Bischof", "Der Türke", "Der Eidgenosse",
             "Die Sibylle"]
    out = []
    for name in names:
        g = "FEMALE" if name.startswith("Die ") else "MALE"
        out.append((slugify(name).replace("-", "_"), name, g))
    return out


def dose_cast():
    return [("foppendorf", "Foppendorf", "MALE"), ("amalie", "Amalie", "FEMALE"), ("baron", "Baron Zierfeld", "MALE"),
            ("lisette", "Lisette", "FEMALE"), ("hans", "Hans", "MALE"), ("notar", "Der Notar", "MALE"),
            ("wirtin", "Die Wirtin", "FEMALE"), ("bedienter", "Ein Bedienter", "MALE")]


PINNED_GER = [
    # slug, title, subtitle, author (last, first, gender), year, edges
    ("buechner-dantons-tod", "Dantons Tod", "Ein Drama", ("Büchner", "Georg", "MALE"), 1835, 624),
    ("gengenbach-der-nollhart", "Der Nollhart", "Fastnachtspiel", ("Gengenbach", "Pamphilus", "MALE"), 1517, 35),
    ("birch-pfeiffer-pfeffer-roesel", "Pfeffer-Rösel oder Die Frankfurter Messe im Jahre 1297",
     "Romantisches Lustspiel in fünf Abtheilungen", ("Birch-Pfeiffer", "Charlotte", "FEMALE"), 1833, 323),
    ("braun-mutter-maria", "Mutter Maria", "Eine Tragödie in fünf Akten", ("Braun", "Lily", "FEMALE"), 1913, 2010),
    ("lessing-emilia-galotti", "Emilia Galotti", "Ein Trauerspiel in fünf Aufzügen",
     ("Lessing", "Gotthold Ephraim", "MALE"), 1772, 40),
    ("pfeffel-die-entfuehrte-dose", "Die entführte Dose", "Ein Lustspiel in einem Aufzuge",
     ("Pfeffel", "Gottlieb Konrad", "MALE"), 1789, 17),
]


# ---------------------------------------------------------------------------
# networks


def make_network(rng, ids, edges, hub=None, seed=0):
    n = len(ids)
    g = nx.Graph()
    g.add_nodes_from(ids)
    if n < 2:
        return g
    max_edges = n * (n - 1) // 2
    edges = max(n - 1, min(edges, max_edges))
    order = list(ids)
    if hub is not None:
        order.remove(hub)
        for other in order:
            g.add_edge(hub, other)
    else:
        rng.shuffle(order)
        for i in range(1, n):
            g.add_edge(order[i], order[rng.randrange(i)])
    # The hub (if any) must stay the unique maximum-degree node.
    attempts = 0
    while g.number_of_edges() < edges:
        a, b = rng.sample(ids, 2)
        attempts += 1
        if g.has_edge(a, b):
            continue
        if hub is not None and attempts < 100000:
            if g.degree(a) + 1 >= n - 2 or g.degree(b) + 1 >= n - 2:
                continue
        g.add_edge(a, b)
    for a, b in g.edges():
        g[a][b]["weight"] = rng.randint(1, 12)
    return g


def network_metrics(g):
    n = g.number_of_nodes()
    e = g.number_of_edges()
    if n >= 2:
        density = 2 * e / (n * (n - 1))
    else:
        density = 0.0
    connected = nx.is_connected(g) if n else False
    comps = nx.number_connected_components(g) if n else 0
    if connected and n > 1:
        apl = nx.average_shortest_path_length(g)
        diam = nx.diameter(g)
    else:
        apl = 0.0
        diam = 0
    closeness = nx.closeness_centrality(g)
    betweenness = nx.betweenness_centrality(g)
    try:
        eig = nx.eigenvector_centrality_numpy(g) if n > 2 else {v: 0.0 for v in g}
    except Exception:
        eig = {v: 0.0 for v in g}
    degrees = dict(g.degree())
    maxdeg = max(degrees.values()) if degrees else 0
    return {
        "size": n,
        "numEdges": e,
        "density": r6(density),
        "averageDegree": r6(2 * e / n) if n else 0,
        "averageClustering": r6(nx.average_clustering(g)) if n else 0,
        "averagePathLength": r6(apl),
        "diameter": diam,
        "maxDegree": maxdeg,
        "maxDegreeIds": sorted(v for v, d in degrees.items() if d == maxdeg),
        "numConnectedComponents": comps,
        "nodes": [
            {
                "id": v,
                "degree": degrees[v],
                "weightedDegree": sum(g[v][u]["weight"] for u in g[v]),
                "closeness": r6(closeness[v]),
                "betweenness": r6(betweenness[v]),
                "eigenvector": r6(abs(eig[v])),
            }
            for v in sorted(g.nodes())
        ],
    }


# ---------------------------------------------------------------------------
# corpus synthesis


def distribute(rng, total, count, fixed):
    """Split `total` into `count` positive sizes, honouring preset values in `fixed`."""
    free = [i for i in range(count) if i not in fixed]
    remaining = total - sum(fixed.values())
    assert remaining >= 2 * len(free), (total, count)
    mean = remaining / len(free)
    sizes = {}
    for i in free:
        sizes[i] = max(2, int(round(rng.lognormvariate(math.log(mean), 0.45))))
    diff = remaining - sum(sizes.values())
    while diff != 0:
        i = rng.choice(free)
        if diff > 0:
            sizes[i] += 1
            diff -= 1
        elif sizes[i] > 2:
            sizes[i] -= 1
            diff += 1
    sizes.update(fixed)
    return [sizes[i] for i in range(count)]


def make_title(rng, pool):
    head = rng.choice(pool["head"])
    noun = rng.choice(pool["noun"])
    if rng.random() < 0.35:
        other = rng.choice(pool["noun"])
        joiner = {"ger": "oder", "fre": "ou", "ita": "ovvero", "swe": "eller", "spa": "o"}.get(pool.get("lang"), "or")
        return f"{head} {noun} {joiner} {rng.choice(pool['head'])} {other}"
    return f"{head} {noun}"


def author_record(last, first, gender):
    full = f"{first} {last}"
    return {
        "name": f"{last}, {first}",
        "fullname": full,
        "shortname": last,
        "gender": gender,
        "refs": [],
    }


class PlaySpec:
    pass


def build_corpus(rng, spec):
    name, acronym, title, nplays, nchars, ymin, ymax, lang = spec
    pool = dict(POOLS[lang])
    pool["lang"] = lang
    plays = []
    fixed = {}
    if name == "ger":
        for i, (slug, ptitle, sub, (last, first, gender), year, edges) in enumerate(PINNED_GER):
            fixed[i] = {"buechner-dantons-tod": 103, "gengenbach-der-nollhart": 14,
                        "birch-pfeiffer-pfeffer-roesel": 40, "braun-mutter-maria": 91,
                        "lessing-emilia-galotti": 13, "pfeffel-die-entfuehrte-dose": 8}[slug]
    sizes = distribute(rng, nchars, nplays, fixed)
    used = set()
    for i in range(nplays):
        p = PlaySpec()
        p.size = sizes[i]
        p.pinned = None
        if name == "ger" and i < len(PINNED_GER):
            slug, ptitle, sub, (last, first, gender), year, edges = PINNED_GER[i]
            p.slug, p.title, p.subtitle = slug, ptitle, sub
            p.authors = [author_record(last, first, gender)]
            p.year = year
            p.edges = edges
            p.pinned = slug
        else:
            female_author = rng.random() < 0.12
            first = rng.choice(pool["first_f"] if female_author else pool["first_m"])
            last = rng.choice(pool["last"])
            p.authors = [author_record(last, first, "FEMALE" if female_author else "MALE")]
            if rng.random() < 0.05:
                last2 = rng.choice(pool["last"])
                p.authors.append(author_record(last2, rng.choice(pool["first_m"]), "MALE"))
            p.title = make_title(rng, pool)
            p.subtitle = rng.choice(pool["genre"])
            base = slugify(f"{last} {p.title}")
            slug = base
            k = 2
            while slug in used:
                slug = f"{base}-{k}"
                k += 1
            p.slug = slug
            p.year = rng.randint(ymin, ymax)
            if rng.random() < 0.03:
                p.year = None
            n = p.size
            p.edges = 0 if n < 2 else rng.randint(n - 1, max(n - 1, min(n * (n - 1) // 2, int(n * 2.6))))
        used.add(p.slug)
        plays.append(p)
    # pin the corpus year range on two free plays
    free = [p for p in plays if p.pinned is None]
    free[0].year = ymin
    free[-1].year = ymax
    for p in plays:
        if p.year is not None:
            assert ymin <= p.year <= ymax
    # API order is by slug, not chronological.
    plays.sort(key=lambda p: p.slug)
    for idx, p in enumerate(plays):
        n = p.size
        if p.pinned == "lessing-emilia-galotti":
            female, male, unknown = 3, 10, 0
        elif p.pinned == "gengenbach-der-nollhart":
            female, male, unknown = 2, 12, 0
        elif p.pinned == "pfeffel-die-entfuehrte-dose":
            female, male, unknown = 3, 5, 0
        else:
            share = min(0.9, max(0.0, rng.gauss(0.27 + 0.0004 * ((p.year or 1800) - 1800), 0.12)))
            female = int(round(share * n))
            unknown = rng.randint(0, max(0, n // 12))
            female = min(female, n - unknown)
            male = n - female - unknown
        p.female, p.male, p.unknown = female, male, unknown
        p.idx = idx
        p.wikidata = "Q%d" % (1000000 + rng.randrange(9000000))
        p.words_text = rng.randint(3000, 60000)
        p.words_sp = int(p.words_text * rng.uniform(0.82, 0.95))
        p.words_stage = p.words_text - p.words_sp
        p.acts = rng.choice([1, 2, 3, 4, 5])
        p.segments = p.acts * rng.randint(1, 9)
        p.groups = rng.randint(0, 3)
        p.genre = rng.choice(GENRES)
        p.premiered = (p.year + rng.randint(0, 2)) if p.year is not None and rng.random() < 0.7 else None
        p.printed = (p.year + rng.randint(0, 3)) if p.year is not None and rng.random() < 0.8 else None
        p.written = (p.year - rng.randint(0, 2)) if p.year is not None and rng.random() < 0.5 else None
        p.pages = rng.randint(40, 260)
        p.density = r6(2 * p.edges / (n * (n - 1))) if n > 1 else 0
        p.avg_degree = r6(2 * p.edges / n) if n else 0
        p.max_degree = min(n - 1, max(1, int(p.avg_degree * rng.uniform(1.2, 2.5)))) if n > 1 else 0
        p.clustering = r6(rng.uniform(0.3, 0.95))
        p.path_length = r6(rng.uniform(1.2, 2.6))
        p.diameter = rng.randint(2, 5)
    return plays


def listing_row(corpus, p):
    return {
        "id": f"{corpus}{p.idx + 1:06d}",
        "name": p.slug,
        "title": p.title,
        "subtitle": p.subtitle,
        "authors": p.authors,
        "yearNormalized": p.year,
        "yearPremiered": p.premiered,
        "yearPrinted": p.printed,
        "yearWritten": p.written,
        "networkSize": p.size,
        "wikidataId": p.wikidata,
        "uri": f"{BASE_URL}/corpora/{corpus}/plays/{p.slug}",
    }


def metadata_row(corpus, p):
    first = p.authors[0]
    return {
        "id": f"{corpus}{p.idx + 1:06d}",
        "name": p.slug,
        "playName": p.slug,
        "title": p.title,
        "subtitle": p.subtitle,
        "firstAuthor": first["shortname"],
        "firstAuthorFullname": first["fullname"],
        "authors": "|".join(a["name"] for a in p.authors),
        "authorGenders": "|".join(a["gender"] for a in p.authors),
        "yearNormalized": p.year,
        "yearPremiered": p.premiered,
        "yearPrinted": p.printed,
        "yearWritten": p.written,
        "size": p.size,
        "numOfSpeakers": p.size,
        "numOfSpeakersFemale": p.female,
        "numOfSpeakersMale": p.male,
        "numOfSpeakersUnknown": p.unknown,
        "numOfPersonGroups": p.groups,
        "numOfSegments": p.segments,
        "numOfActs": p.acts,
        "numOfP": p.segments * 7,
        "numOfL": p.segments * 11,
        "numEdges": p.edges,
        "density": p.density,
        "averageDegree": p.avg_degree,
        "averageClustering": p.clustering,
        "averagePathLength": p.path_length,
        "diameter": p.diameter,
        "maxDegree": p.max_degree,
        "numConnectedComponents": 1,
        "wordCountText": p.words_text,
        "wordCountSp": p.words_sp,
        "wordCountStage": p.words_stage,
        "normalizedGenre": p.genre,
        "libretto": p.genre == "Libretto",
        "wikidataId": p.wikidata,
        "wikipediaLinkCount": (p.idx * 7) % 31,
        "digitalSource": f"https://github.com/dracor-org/{corpus}dracor/blob/main/tei/{p.slug}.xml",
        "originalSourcePublisher": "Verlag der Buchhandlung",
        "originalSourcePubPlace": "Leipzig",
        "originalSourceYear": p.printed,
        "originalSourceNumberOfPages": p.pages,
        "sourceUrl": f"https://dracor.org/{corpus}/{p.slug}",
        "sourceName": "TextGrid Repository",
        "originalSourceTitle": f"{p.title}. {p.subtitle}",
        "licence": "Creative Commons Zero v1.0 Universal",
        "licenceUrl": "https://creativecommons.org/publicdomain/zero/1.0/",
        "teiUrl": f"{BASE_URL}/corpora/{corpus}/plays/{p.slug}/tei",
        "charactersUrl": f"{BASE_URL}/corpora/{corpus}/plays/{p.slug}/characters",
    }


def write_play_endpoints(snap, rng, corpus, p, cast, hub=None):
    ids = [c[0] for c in cast]
    assert len(ids) == p.size == len(set(ids)), (p.slug, len(ids), p.size)
    g = make_network(rng, ids, p.edges, hub=hub)
    assert g.number_of_edges() == p.edges or p.size < 2, (p.slug, g.number_of_edges(), p.edges)
    assert all(d > 0 for _, d in g.degree()) or p.size < 2
    m = network_metrics(g)
    node_by_id = {nd["id"]: nd for nd in m["nodes"]}
    base = f"/corpora/{corpus}/plays/{p.slug}"

    gender_counts = {"FEMALE": 0, "MALE": 0, "UNKNOWN": 0}
    for _, _, gd in cast:
        gender_counts[gd] += 1
    p.female, p.male, p.unknown = gender_counts["FEMALE"], gender_counts["MALE"], gender_counts["UNKNOWN"]
    p.density = m["density"]
    p.avg_degree = m["averageDegree"]
    p.max_degree = m["maxDegree"]
    p.clustering = m["averageClustering"]
    p.path_length = m["averagePathLength"]
    p.diameter = m["diameter"]

    chars = []
    for cid, cname, gd in cast:
        nd = node_by_id[cid]
        if hub is not None and cid == hub:
            words, acts, scenes = 9000, 260, 30
        elif hub is not None:
            words, acts, scenes = rng.randint(200, 6000), rng.randint(5, 180), rng.randint(1, 25)
        else:
            words, acts, scenes = rng.randint(5, 4000), rng.randint(1, 120), rng.randint(1, 20)
        chars.append({
            "id": cid,
            "name": cname,
            "gender": gd,
            "isGroup": False,
            "numOfScenes": scenes,
            "numOfSpeechActs": acts,
            "numOfWords": words,
            "degree": nd["degree"],
            "weightedDegree": nd["weightedDegree"],
            "closeness": nd["closeness"],
            "betweenness": nd["betweenness"],
            "eigenvector": nd["eigenvector"],
        })
    snap.put(base + "/characters", chars)

    detail = listing_row(corpus, p)
    detail.update({
        "corpus": corpus,
        "characters": [{"id": c[0], "name": c[1], "gender": c[2], "isGroup": False} for c in cast],
        "segments": [
            {"type": "scene", "number": s + 1, "title": f"{(s % p.acts) + 1}. Akt",
             "speakers": sorted(rng.sample(ids, min(len(ids), rng.randint(1, 4))))}
            for s in range(min(p.segments, 12))
        ],
        "originalSource": f"Verlag der Buchhandlung, Leipzig {p.printed or ''}".strip(),
    })
    snap.put(base, detail)

    metrics = dict(m)
    metrics.update({"id": detail["id"], "name": p.slug, "corpus": corpus,
                    "wikipediaLinkCount": (p.idx * 7) % 31})
    snap.put(base + "/metrics", metrics)

    lines = ["Source,Type,Target,Weight"]
    for a, b in sorted(tuple(sorted(e)) for e in g.edges()):
        lines.append(f"{a},Undirected,{b},{g[a][b]['weight']}")
    snap.put(base + "/networkdata/csv", "\n".join(lines) + "\n", "text/csv")
    return chars, g


WORDS = ["ja", "nein", "Herr", "gnädig", "gewiss", "warum", "Prinz", "Vater", "Tochter", "sagen", "kommen", "Gott",
         "Himmel", "Ehre", "Liebe", "schweigen", "nun", "doch", "hier", "dort", "heute", "sterben", "leben", "wollen"]


def spoken_text(rng, cast, chars, empty=False):
    blocks = []
    for (cid, cname, gd), rec in zip(cast, chars):
        if empty:
            text = []
        else:
            n = max(1, rec["numOfSpeechActs"] // 20)
            text = [" ".join(rng.choice(WORDS) for _ in range(rng.randint(3, 12))).capitalize() + "."
                    for _ in range(n)]
        blocks.append({"id": cid, "label": cname, "gender": gd, "text": text})
    return blocks


def write_spoken(snap, corpus, slug, blocks):
    base = f"/corpora/{corpus}/plays/{slug}"
    snap.put(base + "/spoken-text-by-character", blocks)
    for gender in (None, "FEMALE", "MALE", "UNKNOWN"):
        lines = [line for b in blocks if gender is None or b["gender"] == gender for line in b["text"]]
        body = "\n".join(lines) + ("\n" if lines else "")
        target = base + "/spoken-text" + (f"?gender={gender}" if gender else "")
        snap.put(target, body, "text/plain")


def corpora_entry(spec, plays):
    name, acronym, title, nplays, nchars, ymin, ymax, lang = spec
    female = sum(p.female for p in plays)
    male = sum(p.male for p in plays)
    return {
        "name": name,
        "acronym": acronym,
        "title": title,
        "repository": f"https://github.com/dracor-org/{name}dracor",
        "uri": f"{BASE_URL}/corpora/{name}",
        "metrics": {
            "plays": len(plays),
            "characters": sum(p.size for p in plays),
            "female": female,
            "male": male,
            "text": len(plays),
            "sp": sum(p.words_sp for p in plays) // 10,
            "stage": sum(p.words_stage for p in plays) // 10,
            "wordcount": {
                "text": sum(p.words_text for p in plays),
                "sp": sum(p.words_sp for p in plays),
                "stage": sum(p.words_stage for p in plays),
            },
            "updated": RECORDED_AT,
        },
    }


OPENAPI = """openapi: 3.0.3
info:
  title: DraCor API
  version: 1.1.0
  description: API of the Drama Corpora Project (DraCor). Fixture copy.
servers:
  - url: https://dracor.org/api/v1
paths:
  /info:
    get:
      summary: Info about the API
  /corpora:
    get:
      summary: List available corpora
      parameters:
        - name: include
          in: query
          schema: {type: string, enum: [metrics]}
  /corpora/{corpusname}:
    get:
      summary: List of plays in a corpus
  /corpora/{corpusname}/metadata:
    get:
      summary: List of metadata for all plays in a corpus
  /corpora/{corpusname}/plays/{playname}:
    get:
      summary: Get metadata and network metrics for a single play
  /corpora/{corpusname}/plays/{playname}/metrics:
    get:
      summary: Get network metrics for a single play
  /corpora/{corpusname}/plays/{playname}/characters:
    get:
      summary: Get a list of characters of a play
  /corpora/{corpusname}/plays/{playname}/networkdata/csv:
    get:
      summary: Get network data of a play in CSV format
  /corpora/{corpusname}/plays/{playname}/spoken-text:
    get:
      summary: Get spoken text of a play (excluding stage directions)
      parameters:
        - name: gender
          in: query
          schema: {type: string, enum: [MALE, FEMALE, UNKNOWN]}
  /corpora/{corpusname}/plays/{playname}/spoken-text-by-character:
    get:
      summary: Get spoken text for each character of a play
  /corpora/{corpusname}/plays/{playname}/stage-directions:
    get:
      summary: Get text of all stage directions of a play
  /corpora/{corpusname}/plays/{playname}/tei:
    get:
      summary: Get TEI document of a single play
"""

RESEARCH = """# Research

Publications using DraCor data or infrastructure (fixture excerpt).

- Fischer, Frank et al. (2019): Programmable Corpora: Introducing DraCor, an Infrastructure for the Research on European Drama. In: Proceedings of DH2019: "Complexities", Utrecht University. doi:10.5281/zenodo.4284002
- Trilcke, Peer; Fischer, Frank (2018): Literaturwissenschaft als Hackathon. Zur Praxeologie der Digital Literary Studies und ihren epistemischen Dingen. In: Zeitschrift für digitale Geisteswissenschaften, Sonderband 3.
- Szemes, Botond; Vida, Bence (2024): Tragic and Comical Networks. Clustering Dramatic Genres According to Structural Properties. In: Proceedings of the Computational Humanities Research Conference 2024.
- Börner, Ingo; Trilcke, Peer (2023): CLS INFRA D7.1 On Programmable Corpora. doi:10.5281/zenodo.7664964
"""


def emilia_tei(cast):
    persons = "\n".join(
        f'        <person xml:id="{cid}" sex="{gd}"><persName>{name}</persName></person>' for cid, name, gd in cast)
    return f"""<?xml version="1.0" encoding="UTF-8"?>
<TEI xmlns="http://www.tei-c.org/ns/1.0" xml:id="ger000005" xml:lang="ger">
  <teiHeader>
    <fileDesc>
      <titleStmt>
        <title type="main">Emilia Galotti</title>
        <title type="sub">Ein Trauerspiel in fünf Aufzügen</title>
        <author>Lessing, Gotthold Ephraim</author>
      </titleStmt>
    </fileDesc>
    <profileDesc>
      <particDesc>
        <listPerson>
{persons}
        </listPerson>
      </particDesc>
    </profileDesc>
  </teiHeader>
  <text>
    <body>
      <div type="act"><head>Erster Aufzug</head>
        <div type="scene"><head>Erster Auftritt</head>
          <stage>Die Szene: ein Kabinett des Prinzen.</stage>
          <sp who="#der_prinz"><speaker>Der Prinz</speaker><p>Klagen, nichts als Klagen!</p></sp>
        </div>
      </div>
    </body>
  </text>
</TEI>
"""


def generate_main(root: Path):
    rng = random.Random(20250714)
    snap = Snapshot(root)
    corpora_json = []
    registry = []
    for spec in CORPORA:
        name = spec[0]
        crng = random.Random(f"{name}-{spec[3]}")
        plays = build_corpus(crng, spec)
        prng = random.Random(f"{name}-plays")
        if name == "ger":
            for p in plays:
                if p.pinned == "buechner-dantons-tod":
                    cast = dantons_cast(prng)
                    write_play_endpoints(snap, prng, name, p, cast)
                elif p.pinned == "gengenbach-der-nollhart":
                    write_play_endpoints(snap, prng, name, p, nollhart_cast())
                elif p.pinned == "birch-pfeiffer-pfeffer-roesel":
                    cast = generic_cast(prng, 40, 12, 26, "figur")
                    write_play_endpoints(snap, prng, name, p, cast)
                elif p.pinned == "braun-mutter-maria":
                    cast = generic_cast(prng, 91, 31, 57, "figur")
                    write_play_endpoints(snap, prng, name, p, cast)
                elif p.pinned == "lessing-emilia-galotti":
                    cast = emilia_cast()
                    chars, _ = write_play_endpoints(snap, prng, name, p, cast, hub="marinelli")
                    write_spoken(snap, name, p.slug, spoken_text(prng, cast, chars))
                    snap.put(f"/corpora/{name}/plays/{p.slug}/stage-directions",
                             "Die Szene: ein Kabinett des Prinzen.\nDer Prinz, an einem Arbeitstische.\n", "text/plain")
                    snap.put(f"/corpora/{name}/plays/{p.slug}/tei", emilia_tei(cast), "application/xml")
                elif p.pinned == "pfeffel-die-entfuehrte-dose":
                    cast = dose_cast()
                    chars, _ = write_play_endpoints(snap, prng, name, p, cast, hub="foppendorf")
        elif name in SMALL_CORPORA:
            for k, p in enumerate(plays):
                cast = generic_cast(prng, p.size, p.female, p.male, "person")
                chars, _ = write_play_endpoints(snap, prng, name, p, cast)
                write_spoken(snap, name, p.slug, spoken_text(prng, cast, chars, empty=(name == "tat" and k == 0)))
        listing = {
            "name": name,
            "acronym": spec[1],
            "title": spec[2],
            "repository": f"https://github.com/dracor-org/{name}dracor",
            "plays": [listing_row(name, p) for p in plays],
        }
        size_listing = snap.put(f"/corpora/{name}", listing)
        size_meta = snap.put(f"/corpora/{name}/metadata", [metadata_row(name, p) for p in plays])
        entry = corpora_entry(spec, plays)
        corpora_json.append(entry)
        registry.append({"name": name, "title": spec[2], "acronym": spec[1],
                         "repository": entry["repository"], "status": "published"})
        print(f"{name}: plays={len(plays)} chars={sum(p.size for p in plays)} listing={size_listing} "
              f"metadata={size_meta}", file=sys.stderr)
    snap.put("/corpora?include=metrics", corpora_json)
    snap.put("/corpora", [{k: v for k, v in c.items() if k != "metrics"} for c in corpora_json])
    snap.put("/info", {"name": "DraCor API", "version": "1.1.0", "status": "stable", "existdb": "6.2.0",
                       "base": BASE_URL})
    snap.put("/openapi.yaml", OPENAPI, "application/yaml")
    snap.put(RESEARCH_URL, RESEARCH, "text/markdown")
    snap.put(REGISTRY_URL, registry)
    snap.finish("Synthetic snapshot of the DraCor API v1 pinned to the evaluation values; "
                "generated by tools/fixtures/generate_fixtures.py.")


MINI = [
    # slug, title, author, gender, year, cast genders (F, M, U), edges
    ("anon-das-erste-spiel", "Das erste Spiel", ("Anon", "Hans", "MALE"), 1701, (1, 3, 0), 4),
    ("anon-die-zweite-probe", "Die zweite Probe", ("Anon", "Hans", "MALE"), 1709, (2, 2, 1), 6),
    ("weber-der-koenig", "Der König", ("Weber", "Anna", "FEMALE"), 1712, (3, 3, 0), 9),
    ("weber-die-gaeste", "Die Gäste", ("Weber", "Anna", "FEMALE"), 1725, (0, 2, 0), 1),
    ("roth-ein-abend", "Ein Abend", ("Roth", "Emil", "MALE"), 1726, (2, 1, 0), 3),
    ("roth-ohne-jahr", "Ohne Jahr", ("Roth", "Emil", "MALE"), None, (1, 1, 2), 4),
]


def generate_mini(root: Path):
    rng = random.Random(6)
    snap = Snapshot(root)
    plays = []
    for idx, (slug, title, (last, first, gender), year, (f, m, u), edges) in enumerate(MINI):
        p = PlaySpec()
        p.slug, p.title, p.subtitle = slug, title, "Ein Spiel"
        p.authors = [author_record(last, first, gender)]
        p.year, p.size, p.edges, p.idx = year, f + m + u, edges, idx
        p.female, p.male, p.unknown = f, m, u
        p.wikidata = f"Q{100 + idx}"
        p.words_text, p.words_sp, p.words_stage = 1000 + idx, 900 + idx, 100
        p.acts, p.segments, p.groups, p.genre = 1, 2, 0, "Comedy"
        p.premiered = p.printed = p.written = year
        p.pages = 10
        p.pinned = slug
        cast = generic_cast(rng, p.size, f, m, "rolle")
        write_play_endpoints(snap, rng, "mini", p, cast)
        plays.append(p)
    spec = ("mini", "MiniDraCor", "Mini Test Corpus", len(plays), sum(p.size for p in plays), 1701, 1726, "ger")
    snap.put("/corpora/mini", {"name": "mini", "acronym": "MiniDraCor", "title": spec[2],
                               "plays": [listing_row("mini", p) for p in plays]})
    snap.put("/corpora/mini/metadata", [metadata_row("mini", p) for p in plays])
    snap.put("/corpora?include=metrics", [corpora_entry(spec, plays)])
    snap.finish("Six-play synthetic corpus for oracle cross-checks.")


def main():
    repo = Path(sys.argv[1] if len(sys.argv) > 1 else ".").resolve()
    generate_main(repo / "fixtures" / "dracor")
    generate_mini(repo / "tests" / "data" / "mini_fixtures")


if __name__ == "__main__":
    main()
