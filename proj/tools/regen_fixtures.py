#!/usr/bin/env python3
"""Regenerate data/fixtures/mock.jsonl.

Runs the bundled scenarios against the mock provider, collects the prompts it
has no reply for, answers them from data/fixtures/answers/<task>/ and repeats
until every scenario is covered.

    python3 tools/regen_fixtures.py --cli build/tools/symdirec
"""

import argparse
import json
import os
import subprocess
import sys
import tempfile

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
DATA = os.path.join(ROOT, "data")
ANSWERS = os.path.join(DATA, "fixtures", "answers")
TOY = os.path.join(DATA, "toy")
FIXTURES = os.path.join(DATA, "fixtures", "mock.jsonl")

VERIFY_REPLY = "0.2"

SCENARIOS = [
    ["run", "synth", "8-bit ripple-carry adder"],
    ["eval", "synth", TOY],
    ["ablate", "--sweep", "k=1..10", "--tasks", TOY],
    ["ablate", "--sweep", "N=2..8", "--tasks", TOY],
    ["eval", "summ", os.path.join(TOY, "summ_pairs.jsonl")],
]


def read(path):
    with open(path, encoding="utf-8") as f:
        return f.read()


def load_tasks():
    specs, sources = {}, {}
    for name in sorted(os.listdir(TOY)):
        d = os.path.join(TOY, name)
        if not os.path.isdir(d):
            continue
        specs[read(os.path.join(d, "spec.txt")).strip()] = name
        sources[read(os.path.join(d, "reference.v")).strip()] = name
    with open(os.path.join(ANSWERS, "aliases.json"), encoding="utf-8") as f:
        specs.update(json.load(f))
    return specs, sources


def request_of(prompt):
    # The request sits between "Request:" and the next blank line.
    body = prompt.split("Request:\n", 1)[1]
    return body.split("\n\n", 1)[0].strip()


def answer(prompt, specs, sources):
    if prompt.startswith("Rate how well"):
        return VERIFY_REPLY
    if prompt.startswith("Summarize what the following HDL code"):
        code = prompt.split("Code:\n", 1)[1]
        for src, task in sorted(sources.items(), key=lambda kv: -len(kv[0])):
            if code.startswith(src):
                return read(os.path.join(ANSWERS, task, "summary.txt")).strip()
        raise KeyError("no task for summarization prompt")
    kind = None
    if prompt.startswith("You are decomposing"):
        kind = "decomposition.txt"
    elif prompt.startswith("Write a complete, synthesizable") or "does not parse" in prompt:
        kind = "design.v"
    if kind is None:
        raise KeyError("unrecognised prompt: " + prompt[:60])
    task = specs.get(request_of(prompt))
    if task is None:
        raise KeyError("no task for request: " + request_of(prompt))
    return read(os.path.join(ANSWERS, task, kind)).strip() + "\n"


def load_fixtures():
    rows = {}
    if os.path.exists(FIXTURES):
        with open(FIXTURES, encoding="utf-8") as f:
            for line in f:
                if line.strip():
                    row = json.loads(line)
                    rows[row["prompt"]] = row["response"]
    return rows


def save_fixtures(rows):
    with open(FIXTURES, "w", encoding="utf-8") as f:
        for prompt in sorted(rows):
            f.write(json.dumps({"prompt": prompt, "response": rows[prompt]}, sort_keys=True) + "\n")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--cli", required=True, help="symdirec binary")
    ap.add_argument("--rounds", type=int, default=12)
    ap.add_argument("--fresh", action="store_true", help="start from an empty fixture file")
    args = ap.parse_args()

    specs, sources = load_tasks()
    rows = {} if args.fresh else load_fixtures()
    save_fixtures(rows)
    with tempfile.TemporaryDirectory() as tmp:
        for _ in range(args.rounds):
            misses = os.path.join(tmp, "misses.jsonl")
            if os.path.exists(misses):
                os.remove(misses)
            for sc in SCENARIOS:
                cmd = [args.cli, "--config", os.path.join(ROOT, "configs", "mock.ini"),
                       "--run-dir", os.path.join(tmp, "runs"), "--record-misses", misses] + sc
                subprocess.run(cmd, stdout=subprocess.DEVNULL, stderr=subprocess.DEVNULL)
            if not os.path.exists(misses):
                print("fixtures:", len(rows))
                return 0
            added = 0
            with open(misses, encoding="utf-8") as f:
                for line in f:
                    prompt = json.loads(line)["prompt"]
                    if prompt not in rows:
                        rows[prompt] = answer(prompt, specs, sources)
                        added += 1
            save_fixtures(rows)
            print("added", added)
    print("still missing replies after", args.rounds, "rounds", file=sys.stderr)
    return 1


if __name__ == "__main__":
    sys.exit(main())
