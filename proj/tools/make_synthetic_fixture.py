#!/usr/bin/env python3
"""Writes the 20-sentence offline corpus used by the end-to-end tests.

Output (tests/fixtures/synthetic/): reference.jsonl (train + calib rows),
input.jsonl (20 test rows with gold), bundle.json (replay scripts and scorer
keys) and config.json (thresholds left for `dao calibrate`).
"""

import argparse
import json
import random
from pathlib import Path

ROLE_ORDER = {
    "Life:Die": ["Agent", "Victim", "Instrument", "Place"],
    "Conflict:Attack": ["Attacker", "Target", "Instrument", "Place"],
    "Justice:Arrest-Jail": ["Person", "Agent", "Place"],
    "Contact:Meet": ["Entity", "Place"],
    "Personnel:Elect": ["Person", "Entity", "Place"],
}

PEOPLE = ["Maria Lopez", "Tom Becker", "Ana Silva", "Omar Haddad", "Lena Novak", "Raj Patel", "Ivan Petrov",
          "Keiko Sato", "Paul Martin", "Sara Cohen", "Ali Khan", "Nina Berg"]
PLACES = ["Lisbon", "Cairo", "Oslo", "Lima", "Hanoi", "Quito", "Accra", "Riga", "Tunis", "Perth"]
GROUPS = ["rebels", "gunmen", "militants", "insurgents"]
ORGS = ["the city council", "the union", "the party", "the senate"]
NEUTRAL = ["The weather in {p} stayed mild for most of the week .",
           "Tourists crowded the old markets of {p} on Sunday .",
           "A new bakery opened near the station in {p} .",
           "Traffic in {p} was slow because of roadworks .",
           "The museum in {p} extended its opening hours ."]


def event_row(rng):
    kind = rng.choice(sorted(ROLE_ORDER))
    person, place = rng.choice(PEOPLE), rng.choice(PLACES)
    if kind == "Life:Die":
        text = f"{person} died in {place} after a long illness ."
        trig, args = "died", [("Victim", person), ("Place", place)]
    elif kind == "Conflict:Attack":
        group = rng.choice(GROUPS)
        text = f"Armed {group} attacked a police post in {place} overnight ."
        trig, args = "attacked", [("Attacker", f"Armed {group}"), ("Target", "a police post"), ("Place", place)]
    elif kind == "Justice:Arrest-Jail":
        text = f"Police arrested {person} in {place} on Monday ."
        trig, args = "arrested", [("Person", person), ("Agent", "Police"), ("Place", place)]
    elif kind == "Contact:Meet":
        other = rng.choice([p for p in PEOPLE if p != person])
        text = f"{person} met {other} in {place} to discuss trade ."
        trig, args = "met", [("Entity", person), ("Entity", other), ("Place", place)]
    else:
        org = rng.choice(ORGS)
        text = f"{org.capitalize()} elected {person} as its new chair in {place} ."
        trig, args = "elected", [("Person", person), ("Entity", org.capitalize()), ("Place", place)]
    order = ROLE_ORDER[kind]
    args.sort(key=lambda a: (order.index(a[0]), a[1]))
    return text, {"type": kind, "trigger": trig,
                  "arguments": [{"role": r, "content": c} for r, c in args]}


def neutral_row(rng):
    return rng.choice(NEUTRAL).format(p=rng.choice(PLACES)), None


def ed_answer(ev):
    return "[]" if ev is None else json.dumps([ev["type"], ev["trigger"]])


def table(ev):
    lines = ["| event type | argument role | argument content |", "|---|---|---|"]
    lines += [f"| {ev['type']} | {a['role']} | {a['content']} |" for a in ev["arguments"]]
    return "\n".join(lines)


def unique_rows(rng, n, positive_share, seen):
    rows = []
    while len(rows) < n:
        text, ev = event_row(rng) if rng.random() < positive_share else neutral_row(rng)
        if text in seen:
            continue
        seen.add(text)
        rows.append((text, ev))
    return rows


def record(rid, text, ev, split):
    return {"id": rid, "text": text, "split": split, "events": [] if ev is None else [ev]}


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "tests/fixtures/synthetic"))
    ap.add_argument("--seed", type=int, default=2024)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    seen = set()
    train = unique_rows(rng, 40, 0.7, seen)
    calib = unique_rows(rng, 16, 0.8, seen)
    test = unique_rows(rng, 20, 0.8, seen)

    with open(out / "reference.jsonl", "w") as f:
        for i, (t, e) in enumerate(train):
            f.write(json.dumps(record(f"t{i:02d}", t, e, "train")) + "\n")
        for i, (t, e) in enumerate(calib):
            f.write(json.dumps(record(f"k{i:02d}", t, e, "calib")) + "\n")
    with open(out / "input.jsonl", "w") as f:
        for i, (t, e) in enumerate(test):
            f.write(json.dumps(record(f"x{i:02d}", t, e, "test")) + "\n")

    keys = []
    for t, e in calib:
        if e is not None:
            scale = round(rng.uniform(0.6, 1.2), 3)
            keys.append({"match": [t, "Argument Extraction"], "phrase": table(e), "scale": round(scale * 2, 3)})
            keys.append({"match": [t], "phrase": ed_answer(e), "scale": scale})

    def always(match, reply):
        return {"match": match, "reply": reply, "repeat": True}

    sessions = {}
    for i, (t, e) in enumerate(test):
        sid = f"x{i:02d}"
        if e is None:
            s = {f"debater:{d}": [always("*", f"{d}: []")] for d in "AB"}
            s["critic"] = [always("*", "Neither answer names an event.")]
            s["judge"] = [always("*", "**No event**")]
            sessions[sid] = s
            continue
        disagree = i % 4 == 1
        keys.append({"match": [t, "Argument Extraction"], "phrase": table(e), "scale": 0.4})
        keys.append({"match": [t], "phrase": ed_answer(e), "scale": 0.3})
        s = {}
        for d in "AB":
            script = [always("Argument Extraction", table(e)), always("argument content", table(e))]
            if disagree and d == "B":
                script.append({"match": "Consider the sentence", "reply": f"{d}: []"})
            script.append(always("*", f"{d}: {ed_answer(e)}"))
            s[f"debater:{d}"] = script
        s["critic"] = [always("*", "Check the trigger against the definitions.")]
        judge = [always("Disagreement observed", table(e))]
        if disagree:
            judge.append({"match": "*", "reply": "**No agreement, debate continues**"})
        judge.append(always("*", f"| event type | event trigger |\n|---|---|\n| {e['type']} | {e['trigger']} |"))
        s["judge"] = judge
        sessions[sid] = s

    bundle = {"agents": {}, "sessions": sessions,
              "scorer": {"keys": keys, "default_phrase": "[]", "default_scale": 1.0}}
    (out / "bundle.json").write_text(json.dumps(bundle, indent=2) + "\n")

    config = {"seed": args.seed, "replay": "bundle.json",
              "adacp": {"ed": {"override": None}, "eae": {"override": None}},
              "paths": {"ontology": "../ace_ontology.jsonl", "reference": "reference.jsonl"}}
    (out / "config.json").write_text(json.dumps(config, indent=2) + "\n")


if __name__ == "__main__":
    main()
