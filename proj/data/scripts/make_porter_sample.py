"""Stem a fixed 200-word sample with NLTK's PorterStemmer in ORIGINAL_ALGORITHM mode."""
import csv
import os
import sys

from nltk.stem.porter import PorterStemmer

CLASSIC = """caresses ponies ties caress cats feed agreed plastered bled motoring sing
conflated troubled sized hopping tanned falling hissing fizzed failing filing happy sky
relational conditional rational valenci hesitanci digitizer conformabli radicalli
differentli vileli analogousli vietnamization predication operator feudalism
decisiveness hopefulness callousness formaliti sensitiviti sensibiliti triplicate
formative formalize electriciti electrical hopeful goodness revival allowance inference
airliner gyroscopic adjustable defensible irritant replacement adjustment dependent
adoption homologou communism activate angulariti homologous effective bowdlerize
probate rate cease controll roll generalizations oscillators dogs doglike plays played
playing""".split()

EXTRA = """abandoned abilities absolutely acceleration accounting acquisitions adjusted
advances agencies agreements allocation analysts announcement appreciation approvals
arbitration assets auctions authorities automobiles bailout bankruptcy bearish borrowers
brokerages bullish businesses capitalization capitalism ceasing challenges charges
commodities companies competitive conditions consolidation consumers contraction
corporations crashes currencies customers declines defaulted deficits deflationary
delivering depreciation derivatives devaluation disappointing dividends earnings
economically electricity employees equities expansion expectations exporters failures
financing forecasting fluctuations generously governments growing happiness hedging
improvements increasingly industries inflationary institutional investigations investors
lending liabilities liquidity losses manufacturing marginally mergers monetary mortgages
negotiations operations optimistic outperformed ownership pensions positively predictions
privatization productivity profitability projections purchasing quarterly rallied ratings
recession recovering regulations relational reporting restructuring revenues securities
sensational settlements shareholders slowdown speculative stabilizing strengthened
subsidies surged taxation troubled uncertainties unemployment valuations volatility
weakened withdrawals""".split()

words = list(dict.fromkeys(CLASSIC + EXTRA))[:200]
assert len(words) == 200, len(words)
stemmer = PorterStemmer(mode=PorterStemmer.ORIGINAL_ALGORITHM)
here = os.path.dirname(os.path.abspath(__file__))
dst = sys.argv[1] if len(sys.argv) > 1 else os.path.join(here, "..", "porter", "porter_sample.csv")
with open(dst, "w", newline="") as f:
    w = csv.writer(f)
    w.writerow(["word", "stem"])
    for word in words:
        w.writerow([word, stemmer.stem(word, to_lowercase=True)])
