"""Convert the vaderSentiment lexicon (MIT) to the two-column token<TAB>valence format."""
import os
import sys

import vaderSentiment

src = os.path.join(os.path.dirname(vaderSentiment.__file__), "vader_lexicon.txt")
dst = sys.argv[1] if len(sys.argv) > 1 else "../lexicon/vader_lexicon.tsv"
with open(src, encoding="utf-8") as f, open(dst, "w", encoding="utf-8") as out:
    out.write("# token<TAB>valence, derived from the VADER lexicon (MIT license)\n")
    for line in f:
        line = line.rstrip("\n")
        if not line:
            continue
        token, valence = line.split("\t")[:2]
        out.write(f"{token}\t{valence}\n")
