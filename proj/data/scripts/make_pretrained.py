"""Extract a 10k-word, 100-d subset of pretrained word2vec vectors.

Source: the GoogleNews word2vec test subset shipped in the `wefe` wheel
(wefe/datasets/data/test_model.kv). Lowercase alphabetic tokens are kept,
ordered by (length, token), the first 10,000 retained, mean-centred and
projected onto their top 100 principal axes, then written in text format.
"""
import re
import sys
import zipfile

import numpy as np
from gensim.models import KeyedVectors

wheel = sys.argv[1]
dst = sys.argv[2] if len(sys.argv) > 2 else "../pretrained/word_vectors_10k_100d.txt"
zipfile.ZipFile(wheel).extract("wefe/datasets/data/test_model.kv", "/tmp/wefe")
kv = KeyedVectors.load("/tmp/wefe/wefe/datasets/data/test_model.kv")
words = sorted((w for w in kv.index_to_key if re.fullmatch(r"[a-z]+", w)),
               key=lambda w: (len(w), w))[:10000]
m = np.array([kv[w] for w in words], dtype=np.float64)
m -= m.mean(axis=0)
_, _, vt = np.linalg.svd(m, full_matrices=False)
r = m @ vt[:100].T
with open(dst, "w", encoding="utf-8") as out:
    for w, row in zip(words, r):
        out.write(w + " " + " ".join(f"{v:.5f}" for v in row) + "\n")
