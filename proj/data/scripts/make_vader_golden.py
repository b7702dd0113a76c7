"""Score fixed sentences with the reference vaderSentiment implementation.

Rounding of the reference output is removed so the golden values can be
compared at 1e-6. The bundled two-column lexicon is used for both sides.
"""
import csv
import math
import os
import sys

from vaderSentiment.vaderSentiment import SentimentIntensityAnalyzer


class UnroundedAnalyzer(SentimentIntensityAnalyzer):
    def score_valence(self, sentiments, text):
        if sentiments:
            sum_s = float(sum(sentiments))
            punct = self._punctuation_emphasis(text)
            if sum_s > 0:
                sum_s += punct
            elif sum_s < 0:
                sum_s -= punct
            compound = sum_s / math.sqrt(sum_s * sum_s + 15)
            compound = max(-1.0, min(1.0, compound))
            pos_sum, neg_sum, neu_count = self._sift_sentiment_scores(sentiments)
            if pos_sum > math.fabs(neg_sum):
                pos_sum += punct
            elif pos_sum < math.fabs(neg_sum):
                neg_sum -= punct
            total = pos_sum + math.fabs(neg_sum) + neu_count
            pos = math.fabs(pos_sum / total)
            neg = math.fabs(neg_sum / total)
            neu = math.fabs(neu_count / total)
        else:
            compound = pos = neg = neu = 0.0
        return {"neg": neg, "neu": neu, "pos": pos, "compound": compound}


SENTENCES = [
    "good",
    "not good",
    "Markets rally as investors cheer strong earnings",
    "Sensex crashes 800 points amid global selloff",
    "RBI keeps repo rate unchanged",
    "Bank shares surge to record high!",
    "Bank shares surge to record high!!!",
    "Bank shares surge to record high!!!!!!",
    "Infosys posts very strong quarterly profit",
    "Infosys posts VERY strong quarterly profit",
    "Tata Motors reports HUGE loss in third quarter",
    "Investors are not happy with the merger",
    "The outlook isn't bad for exporters",
    "Analysts never expected such a great rally",
    "Oil prices fall sharply on weak demand",
    "Gold gains as dollar weakens",
    "Rupee slightly weaker against the dollar",
    "Growth was good, but inflation remains a serious worry",
    "Profits rose but the outlook is uncertain",
    "Shares are kind of flat today",
    "The bank reported a somewhat disappointing result",
    "Fraud probe hits company shares hard",
    "No growth expected in the coming year",
    "There is no doubt the recovery is strong",
    "At least the losses were not catastrophic",
    "It was the least successful launch this year",
    "Will the market recover?? Traders are worried",
    "Is this the end of the bull run???",
    "Is this really the end of the crisis????",
    "Stocks win big while bonds lose",
    "Company wins award for excellence",
    "Government announces relief package for farmers",
    "Unemployment rises to the highest level in years",
    "Economy shows strong signs of recovery",
    "Crisis deepens as banks fail",
    "Regulators warn of risky lending practices",
    "Startup raises funding to expand operations",
    "Investors panic as markets plunge",
    "Optimism returns to Dalal Street",
    "Weak monsoon threatens rural demand",
    "Exports hit record, trade deficit narrows",
    "Stock market closes higher for fifth straight session",
    "Layoffs continue at tech giants",
    "Merger creates the largest lender in the country",
    "Airline files for bankruptcy protection",
    "Strong demand boosts auto sales",
    "Nifty ends flat amid mixed global cues",
    "Ratings agency upgrades outlook to positive",
    "Court rejects appeal, company faces heavy penalty",
    "Smart investors love this wonderful opportunity",
]

here = os.path.dirname(os.path.abspath(__file__))
lexicon = os.path.abspath(os.path.join(here, "..", "lexicon", "vader_lexicon.tsv"))
dst = sys.argv[1] if len(sys.argv) > 1 else os.path.join(here, "..", "golden", "vader_golden.csv")


class BundledLexiconAnalyzer(UnroundedAnalyzer):
    def make_lex_dict(self):
        lex = {}
        for line in self.lexicon_full_filepath.rstrip("\n").split("\n"):
            if not line or line.startswith("#"):
                continue
            word, measure = line.strip().split("\t")[0:2]
            lex[word] = float(measure)
        return lex


analyzer = BundledLexiconAnalyzer(lexicon_file=lexicon)
assert len(SENTENCES) == 50
with open(dst, "w", newline="", encoding="utf-8") as f:
    w = csv.writer(f)
    w.writerow(["text", "neg", "neu", "pos", "compound"])
    for s in SENTENCES:
        r = analyzer.polarity_scores(s)
        w.writerow([s] + [repr(r[k]) for k in ("neg", "neu", "pos", "compound")])
