// Writes the random test corpora under fixtures/corpus. Run once; the output
// is committed and the tests only ever read it.
//
//   framelab_corpus <out-dir>

#include <algorithm>
#include <filesystem>
#include <iostream>

#include "framelab/document_io.hpp"
#include "framelab/random.hpp"

using namespace framelab;

namespace {

Field pick_field(Rng& rng) { return rng.coin() ? Field::Complex : Field::Real; }

Index pick(Rng& rng, Index lo, Index hi) {
  return lo + static_cast<Index>(rng.index(static_cast<std::size_t>(hi - lo + 1)));
}

// rows x cols with rank min(rank, rows, cols).
Matrix with_rank(Rng& rng, Index rows, Index cols, Index rank, Field field) {
  rank = std::min({rank, rows, cols});
  if (rank == 0) return Matrix::Zero(rows, cols);
  return rng.matrix(rows, rank, field) * rng.matrix(rank, cols, field);
}

Json douglas_corpus(Rng& rng) {
  Json cases = Json::array();
  for (int i = 0; i < 100; ++i) {
    const Field field = pick_field(rng);
    const Index n = pick(rng, 2, 8);
    const Index m = pick(rng, 1, 8);
    const Index p = pick(rng, 1, 6);
    const Matrix l2 = with_rank(rng, n, m, pick(rng, 1, std::min(n, m)), field);
    const Matrix g = rng.matrix(m, p, field);
    Json c;
    c["field"] = to_string(field);
    c["l2"] = encode_matrix(l2, field);
    c["g"] = encode_matrix(g, field);
    c["l1"] = encode_matrix(l2 * g, field);
    cases.push_back(std::move(c));
  }
  return Json{{"kind", "douglas"}, {"cases", std::move(cases)}};
}

Json matrix_corpus(Rng& rng) {
  Json cases = Json::array();
  for (int i = 0; i < 200; ++i) {
    const Field field = pick_field(rng);
    const Index rows = pick(rng, 1, 8);
    const Index cols = pick(rng, 1, 8);
    const Index rank = pick(rng, 0, std::min(rows, cols));
    Json c;
    c["field"] = to_string(field);
    c["rank"] = rank;
    c["matrix"] = encode_matrix(with_rank(rng, rows, cols, rank, field), field);
    cases.push_back(std::move(c));
  }
  return Json{{"kind", "matrices"}, {"cases", std::move(cases)}};
}

Json projection_corpus(Rng& rng) {
  Json cases = Json::array();
  for (int i = 0; i < 100; ++i) {
    const Field field = pick_field(rng);
    const Index n = pick(rng, 2, 8);
    const Index m = pick(rng, 1, n);
    Json c;
    c["field"] = to_string(field);
    c["spanning"] = encode_matrix(rng.matrix(n, m, field), field);
    c["unitary"] = encode_matrix(rng.unitary(n, field), field);
    cases.push_back(std::move(c));
  }
  return Json{{"kind", "projection"}, {"cases", std::move(cases)}};
}

Json paley_wiener_corpus(Rng& rng) {
  Json cases = Json::array();
  for (int i = 0; i < 100; ++i) {
    const Field field = pick_field(rng);
    const Index n = pick(rng, 2, 8);
    const double lambda1 = rng.uniform(0.0, 0.6);
    const double lambda2 = rng.uniform(0.0, 0.6);
    Matrix e = rng.matrix(n, n, field);
    e /= operator_norm(e);
    // Sizes around lambda1 + lambda2 / 2 give a mix of certified and inconclusive cases.
    const double size = rng.uniform(0.0, 1.2) * (lambda1 + 0.5 * lambda2);
    Json c;
    c["field"] = to_string(field);
    c["lambda1"] = lambda1;
    c["lambda2"] = lambda2;
    c["u"] = encode_matrix(identity(n) + size * e, field);
    cases.push_back(std::move(c));
  }
  return Json{{"kind", "paley_wiener"}, {"cases", std::move(cases)}};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: framelab_corpus <out-dir>\n";
    return 2;
  }
  const std::filesystem::path dir(argv[1]);
  std::filesystem::create_directories(dir);
  try {
    Rng douglas(0xC0A1ULL);
    Rng matrices(0xC0A2ULL);
    Rng projection(0xC0A3ULL);
    Rng paley(0xC0A4ULL);
    write_text_file((dir / "douglas.json").string(), format_json(douglas_corpus(douglas)));
    write_text_file((dir / "matrices.json").string(), format_json(matrix_corpus(matrices)));
    write_text_file((dir / "projection.json").string(), format_json(projection_corpus(projection)));
    write_text_file((dir / "paley_wiener.json").string(), format_json(paley_wiener_corpus(paley)));
  } catch (const std::exception& e) {
    std::cerr << "framelab_corpus: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
