#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "newsent/embeddings.hpp"
#include "newsent/error.hpp"

namespace newsent::embed {

void EmbeddingMatrix::add_row(const std::string& token, std::span<const double> values) {
  if (values.size() != dim_)
    throw Error(ErrorKind::InvalidArgument,
                "row has " + std::to_string(values.size()) + " values, expected " + std::to_string(dim_), token);
  if (!index_.emplace(token, tokens_.size()).second)
    throw Error(ErrorKind::InvalidArgument, "duplicate token", token);
  tokens_.push_back(token);
  data_.insert(data_.end(), values.begin(), values.end());
}

std::optional<std::size_t> EmbeddingMatrix::find(const std::string& token) const {
  auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::span<const double> EmbeddingMatrix::at(const std::string& token) const {
  auto i = find(token);
  if (!i) throw Error(ErrorKind::InvalidArgument, "token not in embedding", token);
  return row(*i);
}

namespace {

double norm(std::span<const double> v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorKind::InvalidArgument, "vector sizes differ");
  const double na = norm(a), nb = norm(b);
  if (na == 0.0 || nb == 0.0) throw Error(ErrorKind::InvalidArgument, "cosine similarity of a zero vector is undefined");
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] * b[i];
  return d / (na * nb);
}

Ranked nearest(std::span<const double> query, const EmbeddingMatrix& emb, std::size_t n,
               std::span<const std::string> exclude) {
  if (query.size() != emb.dim()) throw Error(ErrorKind::InvalidArgument, "query dimension mismatch");
  const double nq = norm(query);
  if (nq == 0.0) throw Error(ErrorKind::InvalidArgument, "cosine similarity of a zero vector is undefined");
  std::unordered_set<std::string> skip(exclude.begin(), exclude.end());
  Ranked out;
  out.reserve(emb.rows());
  for (std::size_t i = 0; i < emb.rows(); ++i) {
    const auto& tok = emb.tokens()[i];
    if (skip.count(tok)) continue;
    auto r = emb.row(i);
    const double nr = norm(r);
    if (nr == 0.0) continue;
    double d = 0;
    for (std::size_t k = 0; k < r.size(); ++k) d += query[k] * r[k];
    out.emplace_back(tok, d / (nq * nr));
  }
  auto cmp = [](const auto& a, const auto& b) { return a.second != b.second ? a.second > b.second : a.first < b.first; };
  if (n < out.size()) {
    std::partial_sort(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(n), out.end(), cmp);
    out.resize(n);
  } else {
    std::sort(out.begin(), out.end(), cmp);
  }
  return out;
}

Ranked most_similar(const std::string& word, const EmbeddingMatrix& emb, std::size_t n) {
  const std::string ex[] = {word};
  return nearest(emb.at(word), emb, n, ex);
}

Ranked analogy(const std::string& a, const std::string& b, const std::string& c, const EmbeddingMatrix& emb,
               std::size_t n) {
  auto va = emb.at(a), vb = emb.at(b), vc = emb.at(c);
  Vector q(emb.dim());
  for (std::size_t k = 0; k < q.size(); ++k) q[k] = va[k] - vb[k] + vc[k];
  const std::string ex[] = {a, b, c};
  return nearest(q, emb, n, ex);
}

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string f;
  while (in >> f) out.push_back(f);
  return out;
}

double parse_value(const std::string& s, const std::string& where) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0' || !std::isfinite(v))
    throw Error(ErrorKind::Parse, "not a finite number: '" + s + "'", where);
  return v;
}

template <class Fn>
void read_rows(const std::filesystem::path& path, Fn&& fn) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open file", path.string());
  std::string line;
  std::size_t lineno = 0, width = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto fields = split_ws(line);
    if (fields.empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(lineno);
    if (fields.size() < 2) throw Error(ErrorKind::Parse, "expected a token followed by values", where);
    if (width == 0) width = fields.size() - 1;
    if (fields.size() - 1 != width)
      throw Error(ErrorKind::Parse,
                  "line has " + std::to_string(fields.size() - 1) + " values, expected " + std::to_string(width), where);
    Vector values(width);
    for (std::size_t i = 0; i < width; ++i) values[i] = parse_value(fields[i + 1], where);
    fn(fields[0], std::move(values), width, where);
  }
}

}  // namespace

EmbeddingMatrix load_pretrained_text(const std::filesystem::path& path) {
  std::optional<EmbeddingMatrix> emb;
  read_rows(path, [&](const std::string& tok, Vector values, std::size_t width, const std::string& where) {
    if (!emb) emb.emplace(width);
    if (emb->find(tok)) throw Error(ErrorKind::Parse, "duplicate token '" + tok + "'", where);
    emb->add_row(tok, values);
  });
  if (!emb) throw Error(ErrorKind::EmptyDataset, "no vectors in file", path.string());
  return std::move(*emb);
}

void save_text(const std::filesystem::path& path, const EmbeddingMatrix& emb) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write file", path.string());
  char buf[32];
  for (std::size_t i = 0; i < emb.rows(); ++i) {
    out << emb.tokens()[i];
    for (double v : emb.row(i)) {
      std::snprintf(buf, sizeof buf, " %.17g", v);
      out << buf;
    }
    out << '\n';
  }
}

std::vector<SentenceVector> load_sentence_vectors(const std::filesystem::path& path) {
  std::vector<SentenceVector> out;
  std::unordered_set<std::string> seen;
  read_rows(path, [&](const std::string& id, Vector values, std::size_t, const std::string& where) {
    if (!seen.insert(id).second) throw Error(ErrorKind::Parse, "duplicate record id '" + id + "'", where);
    out.push_back({id, std::move(values)});
  });
  if (out.empty()) throw Error(ErrorKind::EmptyDataset, "no vectors in file", path.string());
  return out;
}

LayerMatrix embedding_layer_matrix(const sparse::Vocabulary& vocab, const EmbeddingMatrix& pretrained,
                                   std::size_t dim) {
  if (dim != pretrained.dim())
    throw Error(ErrorKind::InvalidArgument,
                "embedding dimension " + std::to_string(dim) + " does not match pretrained dimension " +
                    std::to_string(pretrained.dim()),
                "embedding_dim");
  LayerMatrix m;
  m.dim = dim;
  m.rows = vocab.size() + 1;
  m.data.assign(m.rows * dim, 0.0);
  for (const auto& [tok, idx] : vocab.word_index) {
    auto r = pretrained.find(tok);
    if (!r) {
      ++m.unmatched;
      continue;
    }
    ++m.matched;
    auto src = pretrained.row(*r);
    std::copy(src.begin(), src.end(), m.data.begin() + static_cast<std::ptrdiff_t>(idx * dim));
  }
  m.coverage = vocab.size() ? static_cast<double>(m.matched) / static_cast<double>(vocab.size()) : 0.0;
  return m;
}

}  // namespace newsent::embed
