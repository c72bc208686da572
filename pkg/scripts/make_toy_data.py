"""Regenerate the bundled toy datasets in src/slicecheck/data/toy/.

The files are small synthetic stand-ins with the same columns as the real
COLD, HateCheck and OLID releases.  Texts are neutral filler sentences;
offensiveness labels and predictions are assigned at random from a fixed
seed, so the files only exercise the tooling and say nothing about any
model.

    python3 scripts/make_toy_data.py
"""

from __future__ import annotations

import csv
import random
from pathlib import Path

OUT = Path(__file__).resolve().parents[1] / "src" / "slicecheck" / "data" / "toy"

SUBJECTS = ["the committee", "my neighbour", "this recipe", "the new album", "our team", "the bus route",
            "that film", "the library", "a friend of mine", "the weather app"]
VERBS = ["is honestly", "seems", "was reported as", "looks", "turned out", "is apparently"]
ADJS = ["great", "terrible", "boring", "amazing", "confusing", "overrated", "fine", "hilarious"]
TAILS = ["", " today", " again", " for once", " as usual", " this week"]
EXTRAS = ["", "", "", " @user_{n}", " https://example.org/p/{n}", " 🔥", " 👀", " 💯", " www.example.com/{n}"]
INFORMAL = ["finna", "bruh", "lowkey", "tryna", "deadass", "y'all"]


def sentence(rng: random.Random, n: int) -> str:
    text = f"{rng.choice(SUBJECTS)} {rng.choice(VERBS)} {rng.choice(ADJS)}{rng.choice(TAILS)}"
    if rng.random() < 0.25:
        text = f"{rng.choice(INFORMAL)} {text}"
    text = text[0].upper() + text[1:] + rng.choice([".", "!", "?", ""])
    return text + rng.choice(EXTRAS).format(n=n)


def noisy(rng: random.Random, gold: str, labels: tuple[str, str], p_correct: float) -> str:
    """Return ``gold`` with probability p_correct, else the other label."""
    return gold if rng.random() < p_correct else labels[labels[0] == gold]


def write(name: str, header: list[str], rows: list[list]) -> None:
    with open(OUT / name, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def majority(votes: list[str]) -> str:
    return "Y" if votes.count("Y") >= 2 else "N"


def make_cold(rng: random.Random, n: int = 120) -> None:
    header = ["ID", "Text", "Cat", "Off1", "Off2", "Off3", "Slur1", "Slur2", "Slur3",
              "Nom1", "Nom2", "Nom3", "Dist1", "Dist2", "Dist3", "Off", "Slur", "Nom", "Dist"]
    rows, preds = [], []
    for i in range(n):
        groups = {}
        for feat, p in (("Off", 0.45), ("Slur", 0.2), ("Nom", 0.2), ("Dist", 0.15)):
            base = "Y" if rng.random() < p else "N"
            # three annotators who usually agree with the underlying value
            groups[feat] = [base if rng.random() < 0.85 else ("N" if base == "Y" else "Y") for _ in range(3)]
        maj = {k: majority(v) for k, v in groups.items()}
        if maj["Slur"] == "Y":
            cat = "off-slur" if maj["Off"] == "Y" else "reclaimed"
        elif maj["Off"] == "Y" and maj["Nom"] == "Y":
            cat = "off-nom"
        else:
            cat = f"Off={maj['Off']}|Slur={maj['Slur']}|Nom={maj['Nom']}|Dist={maj['Dist']}"
        rows.append([i + 1, sentence(rng, i), cat, *groups["Off"], *groups["Slur"], *groups["Nom"],
                     *groups["Dist"], maj["Off"], maj["Slur"], maj["Nom"], maj["Dist"]])
        unanimous = len(set(groups["Off"])) == 1
        pred = noisy(rng, maj["Off"], ("N", "Y"), 0.8 if unanimous else 0.55)
        preds.append(["LABEL_1" if pred == "Y" else "LABEL_0"])
    write("cold.csv", header, rows)
    write("cold_predictions.csv", ["prediction"], preds)


# functionality code -> gold label; two or three codes per coarse category
HATECHECK_FUNCTIONALITIES = {
    "counter_quote_nh": "non-hateful",
    "counter_ref_nh": "non-hateful",
    "derog_neg_emote_h": "hateful",
    "derog_dehum_h": "hateful",
    "ident_neutral_nh": "non-hateful",
    "ident_pos_nh": "non-hateful",
    "negate_pos_h": "hateful",
    "negate_neg_nh": "non-hateful",
    "target_obj_nh": "non-hateful",
    "target_indiv_nh": "non-hateful",
    "phrase_question_h": "hateful",
    "phrase_opinion_h": "hateful",
    "profanity_h": "hateful",
    "profanity_nh": "non-hateful",
    "ref_subs_clause_h": "hateful",
    "ref_subs_sent_h": "hateful",
    "slur_h": "hateful",
    "slur_reclaimed_nh": "non-hateful",
    "spell_char_swap_h": "hateful",
    "spell_leet_h": "hateful",
    "threat_dir_h": "hateful",
    "threat_norm_h": "hateful",
}
IDENTITIES = ["group a", "group b", "group c", "group d"]


def make_hatecheck(rng: random.Random, per_code: int = 8) -> None:
    header = ["functionality", "case_id", "test_case", "label_gold", "target_ident", "direction",
              "focus_words", "focus_lemma", "ref_case_id", "ref_templ_id", "templ_id"]
    rows, preds_a, preds_b = [], [], []
    case_id = 0
    for code, gold in HATECHECK_FUNCTIONALITIES.items():
        untargeted = code.startswith("target_")
        for k in range(per_code):
            case_id += 1
            ident = "" if untargeted else rng.choice(IDENTITIES)
            about = "someone" if untargeted else f"people in {ident}"
            text = f"Template {code.split('_')[0]} case {k}: a sentence about {about}."
            direction = "" if untargeted else rng.choice(["general", "directed"])
            focus = "placeholder" if code.startswith(("slur", "profanity")) else ""
            ref_case = case_id - 1 if code.startswith(("negate", "counter")) and k else ""
            rows.append([code, case_id, text, gold, ident, direction, focus, focus,
                         ref_case, "", 100 + k])
            pa = noisy(rng, gold, ("hateful", "non-hateful"), 0.75)
            preds_a.append(["LABEL_1" if pa == "hateful" else "LABEL_0"])
            pb = noisy(rng, gold, ("hateful", "non-hateful"), 0.65)
            preds_b.append([rng.choice(["offensive", "hatespeech"]) if pb == "hateful" else "normal"])
    write("hatecheck.csv", header, rows)
    write("hatecheck_predictions_a.csv", ["prediction"], preds_a)
    write("hatecheck_predictions_b.csv", ["prediction"], preds_b)


def make_olid(rng: random.Random, n: int = 150) -> None:
    rows, preds_int, preds_float = [], [], []
    for i in range(n):
        text = sentence(rng, i)
        if rng.random() < 0.3:
            text = f"{text} The female lead was {rng.choice(ADJS)}."
        gold = "OFF" if rng.random() < 0.35 else "NOT"
        rows.append([text, gold])
        pred = noisy(rng, gold, ("NOT", "OFF"), 0.8)
        preds_int.append([int(pred == "OFF")])
        preds_float.append([float(pred == "OFF")])
    write("olid.csv", ["Text", "label"], rows)
    write("olid_predictions.csv", ["prediction"], preds_int)
    write("olid_predictions_float.csv", ["prediction"], preds_float)


def make_dialect_model() -> None:
    """Word/topic likelihoods for a handful of filler words."""
    rows = [["word", "aa", "hispanic", "other", "white"]]
    for w in INFORMAL:
        rows.append([w, "0.12", "0.02", "0.01", "0.01"])
    for w in ("honestly", "seems", "looks", "great", "terrible", "boring", "amazing"):
        rows.append([w, "0.01", "0.02", "0.03", "0.04"])
    for w in ("today", "again", "week"):
        rows.append([w, "0.02", "0.03", "0.02", "0.02"])
    with open(OUT / "dialect_model.tsv", "w", encoding="utf-8") as fh:
        fh.writelines("\t".join(r) + "\n" for r in rows)


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    rng = random.Random(20230701)
    make_cold(rng)
    make_hatecheck(rng)
    make_olid(rng)
    make_dialect_model()


if __name__ == "__main__":
    main()
