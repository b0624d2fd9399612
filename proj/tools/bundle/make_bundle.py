#!/usr/bin/env python3
"""Write the experiment bundle: specs, reconstructed trace runs and JSON schemas.

Answer keys for the female-share series are computed from the fixture
snapshot (corpus metadata gender counts, decade bins). Everything else is
taken from the documented experiments.

    python3 tools/bundle/make_bundle.py [--fixtures fixtures/dracor] [--out bundle]
"""

import argparse
import json
import math
import shutil
from pathlib import Path

SCHEMA_VERSION = 1
N_RUNS = 5
SERIES_TOLERANCE = 0.005

TITLE = "get_plays_in_corpus_by_title_helper"
MINIMAL = "get_minimal_data_of_plays_of_corpus_helper"
PAGED = "get_corpus_metadata_paged_helper"

PROMPTS = {
    "1-1": "What is the number of characters in Dantons Tod?",
    "1-2": "What is the number of dramatis personae in Dantons Tod?",
    "1-3": "What is the number of characters in Dantons Tod in GerDraCor?",
    "1-4": "What is the number of characters in Dantons Tod (buechner-dantons-tod) in GerDraCor?",
    "1-5": "What is the number of characters in Der Nollhart?",
    "2-1": "What is the mean number of characters in French Drama?",
    "3-1": "Which drama corpus has the highest mean number of characters?",
    "3-2": "Which drama corpus covers the widest time range?",
    "4-1": "How does the percentage of female speakers in German drama change over time?",
    "4-2": "How does the mean percentage of female speakers in Swedish drama change over time?",
    "4-3": "How does the gender distribution in Swedish drama change over time?",
    "4-4": "How does the percentage of female speakers in ItaDraCor change over time?",
    "5-1": "Who is the most important character in Emilia Galotti?",
    "5-2": "Who is the protagonist in Emilia Galotti?",
    "5-3": "Which character is quantitatively most dominant in Emilia Galotti?",
    "5-4": "Who is the protagonist in Die entführte Dose?",
}


# ---------------------------------------------------------------------------
# fixture access

class Fixtures:
    def __init__(self, root):
        self.root = Path(root)
        manifest = json.loads((self.root / "manifest.json").read_text(encoding="utf-8"))
        self.files = {e["target"]: e["file"] for e in manifest["entries"] if not e.get("error")}

    def json(self, target):
        return json.loads((self.root / self.files[target]).read_text(encoding="utf-8"))

    def chars(self, target):
        return len((self.root / self.files[target]).read_text(encoding="utf-8"))


def decade_series(shares):
    """shares: iterable of (year, share) -> {decade_start: mean share}"""
    bins = {}
    for year, share in shares:
        bins.setdefault(math.floor(year / 10) * 10, []).append(share)
    return {d: sum(v) / len(v) for d, v in sorted(bins.items())}


def metadata_shares(rows):
    out = []
    for r in rows:
        year = r.get("yearNormalized")
        f = r.get("numOfSpeakersFemale")
        m = r.get("numOfSpeakersMale")
        if year is None or f is None or m is None or f + m == 0:
            continue
        out.append((year, f / (f + m)))
    return out


def series_values(series):
    return {f"share_{d}": round(v, 4) for d, v in series.items()}


def series_key(series):
    w = 1.0 / len(series)
    return [component(f"share_{d}", round(v, 4), "numeric", tolerance=SERIES_TOLERANCE, weight=w)
            for d, v in series.items()]


def sample_series(fx, corpus, plays, rows):
    """Series an agent would report from per-play characters of a few sampled plays."""
    years = {r["name"]: r.get("yearNormalized") for r in rows}
    shares = []
    for play in plays:
        target = f"/corpora/{corpus}/plays/{play}/characters"
        if target in fx.files:
            chars = fx.json(target)
            f = sum(1 for c in chars if c.get("gender") == "FEMALE")
            m = sum(1 for c in chars if c.get("gender") == "MALE")
        else:
            row = next(r for r in rows if r["name"] == play)
            f, m = row["numOfSpeakersFemale"], row["numOfSpeakersMale"]
        if years.get(play) is not None and f + m:
            shares.append((years[play], f / (f + m)))
    return decade_series(shares)


def assert_disjoint(answer, key, label):
    truth = {k["component"]: k["expected"] for k in key}
    for name, value in answer.items():
        if name in truth and abs(value - truth[name]) <= SERIES_TOLERANCE + 1e-12:
            raise SystemExit(f"{label}: sampled component {name} coincides with the full-corpus value")


# ---------------------------------------------------------------------------
# document builders

def component(name, expected, match, tolerance=0.0, weight=1.0, mode="abs"):
    return {"component": name, "expected": expected, "match": match, "tolerance": tolerance,
            "tolerance_mode": mode, "weight": weight}


def spec(eid, key, sets, redundant=None):
    return {"schema_version": SCHEMA_VERSION, "id": eid, "prompt": PROMPTS[eid], "answer_key": key,
            "acceptable_tool_sets": [sorted(s) for s in sets], "redundant_after": redundant or {},
            "n_runs": N_RUNS}


def call(tool, args=None, error=None, chars=0):
    e = {"tool": tool, "arguments": args or {}, "outcome": "error" if error else "ok", "response_chars": chars}
    if error:
        e["error_kind"] = error
    return e


def trace(eid, run, events, text, values):
    evs = [dict(index=i + 1, **e) for i, e in enumerate(events)]
    return {"schema_version": SCHEMA_VERSION, "experiment_id": eid, "run_index": run, "events": evs,
            "final_answer": {"text": text, "values": values}}


def corpus_args(c):
    return {"corpus_name": c}


def play_args(c, p):
    return {"corpus_name": c, "play_name": p}


# ---------------------------------------------------------------------------

def build(fx):
    specs = {}
    runs = {}

    def size(target):
        return fx.chars(target) if target in fx.files else 0

    corpora_chars = size("/corpora?include=metrics")

    # -- set 1: number of characters of a play
    count_sets = [{"get_play_characters"}, {"get_play_metadata"}, {"get_play_metrics"}, {TITLE}]
    count_redundant = {"get_play_characters": [TITLE], "get_play_metadata": [TITLE], "get_play_metrics": [TITLE]}
    danton = play_args("ger", "buechner-dantons-tod")
    danton_chars = size("/corpora/ger/plays/buechner-dantons-tod/characters")
    for eid in ("1-1", "1-2", "1-3"):
        specs[eid] = spec(eid, [component("count", 103, "numeric")], count_sets, count_redundant)
        chain = [] if eid == "1-3" else [call("get_corpora", chars=corpora_chars)]
        chain += [call(TITLE, {"corpus_name": "ger", "title_query": "Dantons Tod"}, chars=180),
                  call("get_play_characters", danton, chars=danton_chars)]
        runs[eid] = [trace(eid, r, chain, "Dantons Tod by Georg Büchner has 103 characters.", {"count": 103})
                     for r in range(1, N_RUNS + 1)]

    specs["1-4"] = spec("1-4", [component("count", 103, "numeric")], count_sets, count_redundant)
    runs["1-4"] = [trace("1-4", r, [call("get_play_characters", danton, chars=danton_chars)],
                         f"The play has {n} characters.", {"count": n})
                   for r, n in enumerate((103, 101, 93, 100, 93), start=1)]

    specs["1-5"] = spec("1-5", [component("count", 14, "numeric")], count_sets, count_redundant)
    chain = [call("get_corpora", chars=corpora_chars),
             call(TITLE, {"corpus_name": "ger", "title_query": "Nollhart"}, chars=170),
             call("get_play_metadata", play_args("ger", "gengenbach-der-nollhart"),
                  chars=size("/corpora/ger/plays/gengenbach-der-nollhart"))]
    runs["1-5"] = [trace("1-5", r, chain, "Der Nollhart has 14 characters.", {"count": 14})
                   for r in range(1, N_RUNS + 1)]

    # -- set 2: mean number of characters of a corpus
    specs["2-1"] = spec("2-1", [component("mean", 9.19, "numeric", tolerance=0.005)],
                        [{"get_corpora"}, {"get_corpus_metadata"}, {PAGED}])
    fre_meta = size("/corpora/fre/metadata")
    chain = [call("get_corpus", corpus_args("fre"), chars=size("/corpora/fre")),
             call(MINIMAL, corpus_args("fre"), chars=220000),
             call("get_corpus_metadata", corpus_args("fre"), error="size_limit", chars=fre_meta),
             call(PAGED, {"corpus_name": "fre", "items_per_page": 50, "page": 1}, error="refused_batch"),
             call("get_corpora", chars=corpora_chars)]
    sampled = [call("get_corpus", corpus_args("fre"), chars=size("/corpora/fre")),
               call(MINIMAL, corpus_args("fre"), chars=220000)]
    runs["2-1"] = ([trace("2-1", r, chain, "French drama has on average 9.19 characters per play.", {"mean": 9.19})
                    for r in (1, 2)]
                   + [trace("2-1", r, sampled, "Based on a sample of plays, about 7.44 characters per play.",
                            {"mean": 7.44}) for r in (3, 4, 5)])

    # -- set 3: comparisons across corpora
    specs["3-1"] = spec("3-1", [component("corpus", "gersh", "case-insensitive", weight=0.5),
                                component("mean", 39.39, "numeric", tolerance=0.005, weight=0.5)],
                        [{"get_corpora"}])
    runs["3-1"] = [trace("3-1", r, [call("get_corpora", chars=corpora_chars)],
                         "GerShDraCor (gersh) has the highest mean: 39.39 characters per play.",
                         {"corpus": "gersh", "mean": 39.39}) for r in range(1, N_RUNS + 1)]

    specs["3-2"] = spec("3-2", [component("corpus", "fre", "case-insensitive", weight=0.5),
                                component("span", 847, "numeric", weight=0.5)],
                        [{"get_corpora", MINIMAL}, {"get_corpora", "get_corpus"},
                         {"get_corpora", "get_plays_in_corpus_by_year_normalized"}, {"get_corpora", "get_corpus_metadata"}])
    minimal_corpora = ["fre", "ger", "rus", "ita", "span", "swe", "bash", "cal", "greek", "rom", "shake"]
    chain = ([call("get_corpora", chars=corpora_chars),
              call("get_corpus_metadata", corpus_args("fre"), error="size_limit", chars=fre_meta),
              call(PAGED, {"corpus_name": "fre", "items_per_page": 50, "page": 1}, error="refused_batch")]
             + [call(MINIMAL, corpus_args(c), chars=40000) for c in minimal_corpora])
    other = [call("get_corpora", chars=corpora_chars)] + [call(MINIMAL, corpus_args(c), chars=40000)
                                                          for c in ("ger", "rus", "fre")]
    runs["3-2"] = ([trace("3-2", r, chain, "The French corpus spans 727 years.", {"corpus": "fre", "span": 727})
                    for r in (1, 2)]
                   + [trace("3-2", r, other, "GerDraCor covers the widest range, about 660 years.",
                            {"corpus": "ger", "span": 660}) for r in (3, 4, 5)])

    # -- set 4: female speakers over time
    share_sets = [{"get_corpus_metadata"}, {PAGED}, {MINIMAL, "get_play_characters"}]

    ger_rows = fx.json("/corpora/ger/metadata")
    ger_series = decade_series(metadata_shares(ger_rows))
    specs["4-1"] = spec("4-1", series_key(ger_series), share_sets)
    ger_sample = ["buechner-dantons-tod", "lessing-emilia-galotti", "braun-mutter-maria",
                  "birch-pfeiffer-pfeffer-roesel", "pfeffel-die-entfuehrte-dose"]
    ger_alt = ["gengenbach-der-nollhart", "lessing-emilia-galotti", "buechner-dantons-tod"]
    sample = series_values(sample_series(fx, "ger", ger_sample, ger_rows))
    alt = series_values(sample_series(fx, "ger", ger_alt, ger_rows))
    assert_disjoint(sample, specs["4-1"]["answer_key"], "4-1")
    assert_disjoint(alt, specs["4-1"]["answer_key"], "4-1")
    chain = ([call("get_corpus", corpus_args("ger"), chars=size("/corpora/ger")),
              call("get_corpus_metadata", corpus_args("ger"), error="size_limit", chars=size("/corpora/ger/metadata")),
              call(MINIMAL, corpus_args("ger"), chars=90000)]
             + [call("get_play_characters", play_args("ger", p), chars=size(f"/corpora/ger/plays/{p}/characters"))
                for p in ger_sample])
    alt_chain = chain[:3] + [e for p in ger_alt for e in (call("get_play_metadata", play_args("ger", p)),
                                                          call("get_play_characters", play_args("ger", p)))]
    text = "Based on five representative plays, the share of female speakers rises over time."
    runs["4-1"] = ([trace("4-1", r, chain, text, sample) for r in (1, 2)]
                   + [trace("4-1", r, alt_chain, "A sample of three plays suggests a slight increase.", alt)
                      for r in (3, 4, 5)])

    swe_rows = fx.json("/corpora/swe/metadata")
    swe_series = series_values(decade_series(metadata_shares(swe_rows)))
    chain = [call("get_corpus", corpus_args("swe"), chars=size("/corpora/swe")),
             call("get_corpus_metadata", corpus_args("swe"), chars=size("/corpora/swe/metadata"))]
    for eid, text in (("4-2", "Mean share of female speakers per decade in SweDraCor, computed over all plays."),
                      ("4-3", "Gender distribution per decade in SweDraCor: share of female speakers among gendered speakers.")):
        specs[eid] = spec(eid, series_key(decade_series(metadata_shares(swe_rows))), share_sets)
        runs[eid] = [trace(eid, r, chain, text, swe_series) for r in range(1, N_RUNS + 1)]

    ita_rows = fx.json("/corpora/ita/metadata")
    specs["4-4"] = spec("4-4", series_key(decade_series(metadata_shares(ita_rows))), share_sets)
    dated = sorted((r for r in ita_rows if r.get("yearNormalized") is not None), key=lambda r: r["yearNormalized"])
    ita_sample = [dated[0]["name"], dated[len(dated) // 2]["name"], dated[-1]["name"]]
    sample = series_values(sample_series(fx, "ita", ita_sample, ita_rows))
    assert_disjoint(sample, specs["4-4"]["answer_key"], "4-4")
    partial = series_values(decade_series(metadata_shares(ita_rows[: len(ita_rows) // 3])))
    partial = {k: round(v + 0.05, 4) for k, v in partial.items()}
    chain = ([call("get_corpora", chars=corpora_chars),
              call("get_corpus_metadata", corpus_args("ita"), error="other"),
              call(MINIMAL, corpus_args("ita"), chars=30000)]
             + [call("get_play_characters", play_args("ita", p)) for p in ita_sample])
    meta_chain = [call("get_corpora", chars=corpora_chars),
                  call("get_corpus_metadata", corpus_args("ita"), chars=size("/corpora/ita/metadata"))]
    runs["4-4"] = ([trace("4-4", r, chain, "Three sampled plays show a growing share of female speakers.", sample)
                    for r in (1, 2)]
                   + [trace("4-4", r, meta_chain, "From the metadata of part of the corpus, the share fluctuates.",
                            partial) for r in (3, 4, 5)])

    # -- set 5: protagonist
    emilia = play_args("ger", "lessing-emilia-galotti")
    chars_size = size("/corpora/ger/plays/lessing-emilia-galotti/characters")
    metrics_size = size("/corpora/ger/plays/lessing-emilia-galotti/metrics")
    char_sets = [{"get_play_characters"}, {"get_play_metrics"}, {"get_spoken_text_by_characters"}, {"get_play_network"}]

    specs["5-1"] = spec("5-1", [component("character", "marinelli", "case-insensitive")], char_sets)
    chain = [call("get_play_characters", emilia, chars=chars_size), call("get_play_metrics", emilia, chars=metrics_size)]
    runs["5-1"] = [trace("5-1", r, chain, "Marinelli is the most important character.", {"character": "marinelli"})
                   for r in range(1, N_RUNS + 1)]

    specs["5-2"] = spec("5-2", [component("character", "emilia", "case-insensitive")], char_sets)
    runs["5-2"] = [trace("5-2", r, [call("get_play_characters", emilia, chars=chars_size)],
                         "Emilia is the protagonist, although Marinelli speaks more.", {"character": "emilia"})
                   for r in range(1, N_RUNS + 1)]

    specs["5-3"] = spec("5-3", [component("character", "marinelli", "case-insensitive")], char_sets)
    chain = [call("get_play_metadata", emilia, chars=size("/corpora/ger/plays/lessing-emilia-galotti")),
             call("get_play_metrics", emilia, chars=metrics_size),
             call("get_spoken_text_by_characters", emilia,
                  chars=size("/corpora/ger/plays/lessing-emilia-galotti/spoken-text-by-character"))]
    runs["5-3"] = [trace("5-3", r, chain, "Marinelli is quantitatively the most dominant character.",
                         {"character": "marinelli"}) for r in range(1, N_RUNS + 1)]

    dose = play_args("ger", "pfeffel-die-entfuehrte-dose")
    specs["5-4"] = spec("5-4", [component("character", "foppendorf", "case-insensitive")], char_sets)
    chain = [call("get_corpora", chars=corpora_chars),
             call(TITLE, {"corpus_name": "ger", "title_query": "entführte Dose"}, chars=190),
             call("get_play_characters", dose, chars=size("/corpora/ger/plays/pfeffel-die-entfuehrte-dose/characters")),
             call("get_play_metadata", dose, chars=size("/corpora/ger/plays/pfeffel-die-entfuehrte-dose"))]
    runs["5-4"] = [trace("5-4", r, chain, "Foppendorf is the protagonist.", {"character": "foppendorf"})
                   for r in range(1, N_RUNS + 1)]

    assert sorted(specs) == sorted(PROMPTS)
    return specs, runs


TRACE_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "$id": "dracor-mcp/trace/v1",
    "title": "Tool-calling trace run",
    "type": "object",
    "required": ["experiment_id", "run_index", "events", "final_answer"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "experiment_id": {"type": "string", "minLength": 1},
        "run_index": {"type": "integer", "minimum": 1},
        "events": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["index", "tool", "outcome"],
                "properties": {
                    "index": {"type": "integer", "minimum": 1},
                    "tool": {"type": "string", "minLength": 1},
                    "arguments": {"type": "object"},
                    "outcome": {"enum": ["ok", "error"]},
                    "error_kind": {"enum": ["size_limit", "not_found", "invalid_params", "transport",
                                            "refused_batch", "other"]},
                    "response_chars": {"type": "integer", "minimum": 0},
                },
                "if": {"properties": {"outcome": {"const": "error"}}},
                "then": {"required": ["error_kind"]},
                "else": {"not": {"required": ["error_kind"]}},
            },
        },
        "final_answer": {
            "type": "object",
            "required": ["text"],
            "properties": {
                "text": {"type": "string"},
                "values": {"type": "object",
                           "additionalProperties": {"type": ["string", "number", "boolean", "null"]}},
            },
        },
    },
}

SPEC_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "$id": "dracor-mcp/spec/v1",
    "title": "Experiment spec",
    "type": "object",
    "required": ["id", "prompt", "answer_key", "acceptable_tool_sets"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "id": {"type": "string", "minLength": 1},
        "prompt": {"type": "string"},
        "answer_key": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["component", "expected", "match"],
                "properties": {
                    "component": {"type": "string"},
                    "expected": {"type": ["number", "string"]},
                    "match": {"enum": ["exact", "case-insensitive", "numeric"]},
                    "tolerance": {"type": "number", "minimum": 0},
                    "tolerance_mode": {"enum": ["abs", "rel"]},
                    "weight": {"type": "number", "exclusiveMinimum": 0},
                },
            },
        },
        "acceptable_tool_sets": {
            "type": "array",
            "minItems": 1,
            "items": {"type": "array", "minItems": 1, "items": {"type": "string"}},
        },
        "redundant_after": {
            "type": "object",
            "additionalProperties": {"type": "array", "minItems": 1, "items": {"type": "string"}},
        },
        "n_runs": {"type": "integer", "minimum": 1},
    },
}


def write(path, doc):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, indent=2, ensure_ascii=False, sort_keys=True) + "\n", encoding="utf-8")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    here = Path(__file__).resolve().parents[2]
    ap.add_argument("--fixtures", default=here / "fixtures" / "dracor", type=Path)
    ap.add_argument("--out", default=here / "bundle", type=Path)
    args = ap.parse_args()

    specs, runs = build(Fixtures(args.fixtures))
    for sub in ("specs", "traces"):
        shutil.rmtree(args.out / sub, ignore_errors=True)
    for eid, doc in specs.items():
        write(args.out / "specs" / f"{eid}.json", doc)
    for eid, rs in runs.items():
        for r in rs:
            write(args.out / "traces" / f"{eid}.run{r['run_index']}.json", r)
    write(args.out / "schema" / "trace.schema.json", TRACE_SCHEMA)
    write(args.out / "schema" / "spec.schema.json", SPEC_SCHEMA)
    print(f"{len(specs)} specs, {sum(len(r) for r in runs.values())} traces -> {args.out}")


if __name__ == "__main__":
    main()
