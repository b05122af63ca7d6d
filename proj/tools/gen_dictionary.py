#!/usr/bin/env python3
"""Generate the synthetic fixture dictionary shipped in data/dictionary.jsonl.

The output is deterministic: the same script always writes the same bytes.
Each line is one JSON record with the fields
word, frequency, definition, examples, synonyms.

    python3 tools/gen_dictionary.py > data/dictionary.jsonl
"""

import json
import random
import sys

THEMES = {
    "beach": "sun sea shell sand wave shore tide coast surf salt reef gull crab "
             "boat sail dune pier harbor bay lagoon island cliff foam spray "
             "towel umbrella kite",
    "forest": "tree leaf moss fern pine oak birch root branch bark trail "
              "deer fox owl bear wolf mushroom acorn creek stream meadow "
              "grove thicket log cabin",
    "city": "street tower bridge road car bus train station market square "
            "window door roof wall lamp sign cafe shop alley park bench "
            "fountain crowd traffic corner",
    "kitchen": "bread cup plate bowl spoon knife fork oven stove kettle tea "
               "coffee milk sugar salt butter cheese apple lemon honey "
               "jar table chair napkin",
    "sky": "cloud rain snow storm wind thunder moon star sky dawn dusk "
           "night morning evening rainbow mist fog frost light shadow "
           "horizon sunrise sunset orbit comet",
    "garden": "flower rose tulip lily daisy petal stem seed soil pot grass "
              "hedge fence gate path stone pond frog bee butterfly bird "
              "nest swing shed ladder",
    "mountain": "peak ridge valley slope rock glacier summit canyon cave "
                "hill boulder pass trail river waterfall lake ice eagle "
                "goat pine camp tent rope",
    "home": "bed pillow blanket lamp book shelf clock mirror rug sofa "
            "curtain candle desk pen paper letter photo frame cat dog "
            "toy basket key stair",
    "music": "song drum guitar piano violin flute horn bell choir melody "
             "rhythm tune note chord stage concert band singer dance "
             "record radio voice echo whistle harp",
    "travel": "map ticket bag suitcase passport plane ship road journey "
              "guide hotel camera postcard compass port airport trip "
              "tour border village town coastline ferry wagon",
    "color": "red blue green yellow orange purple pink white black gray "
             "gold silver bright dark pale warm cool golden amber crimson "
             "azure ivory scarlet violet",
    "weather": "warm cold hot chill breeze gust drizzle shower heat humid "
               "dry damp sunny cloudy windy stormy frosty misty calm "
               "clear wet icy hazy gentle",
}

SUFFIXES = ["s", "y", "less", "like", "ward", "side", "light", "fall",
            "scape", "land", "ful", "er", "ish", "let", "craft", "line",
            "work", "mark"]

FILLER = ["the", "with", "was", "were", "under", "over", "near", "into",
          "from", "while", "quietly", "slowly", "every", "some", "their",
          "our", "this", "that", "and", "beside", "after", "before",
          "softly", "again", "along"]

TARGET_SIZE = 5000


def build_vocabulary(rng):
    base = []
    theme_of = {}
    for theme, words in THEMES.items():
        for w in words.split():
            if w not in theme_of:
                theme_of[w] = theme
                base.append(w)
    derived = []
    for w in base:
        for suf in SUFFIXES:
            cand = w + suf
            if cand not in theme_of and cand not in derived:
                derived.append(cand)
    rng.shuffle(derived)
    taken = derived[: TARGET_SIZE - len(base)]
    for d in taken:
        root = max((b for b in base if d.startswith(b)), key=len)
        theme_of[d] = theme_of[root]
    vocab = base + taken
    assert len(vocab) == TARGET_SIZE, len(vocab)
    assert not (set(vocab) & set(FILLER))
    return base, vocab, theme_of


def main():
    rng = random.Random(20240611)
    base, vocab, theme_of = build_vocabulary(rng)
    by_theme = {}
    for w in vocab:
        by_theme.setdefault(theme_of[w], []).append(w)
    base_set = set(base)

    records = []
    for w in vocab:
        theme = theme_of[w]
        peers = by_theme[theme]
        if w in base_set:
            freq = rng.randint(2000, 90000)
        else:
            freq = rng.randint(1, 4000)

        root = max((b for b in base if w.startswith(b) and b != w),
                   key=len, default=None)
        def_words = rng.sample(peers, 5) + rng.sample(vocab, 4)
        if root is not None:
            def_words.insert(0, root)
        definition = "a {} thing, {} and {}; often seen near {}, {} or {} ({}). related to {} and {}.".format(
            *(def_words + rng.sample(peers, 11))[:9])
        examples = []
        for _ in range(2):
            words = rng.sample(peers, 4) + rng.sample(vocab, 2)
            fill = rng.sample(FILLER, 5)
            sentence = "{} {} {} {} {}, {} {} {} {} {} {}!".format(
                fill[0].capitalize(), words[0], fill[1], words[1], words[2],
                fill[2], words[3], fill[3], words[4], fill[4], words[5])
            examples.append(sentence)
        synonyms = sorted(set(rng.sample(peers, 3)) - {w})
        records.append({
            "word": w,
            "frequency": freq,
            "definition": definition,
            "examples": examples,
            "synonyms": synonyms,
        })

    records.sort(key=lambda r: r["word"])
    out = sys.stdout
    for r in records:
        out.write(json.dumps(r, ensure_ascii=False, separators=(",", ":")))
        out.write("\n")


if __name__ == "__main__":
    main()
