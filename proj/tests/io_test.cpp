#include "steroid/io.hpp"

#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "steroid/decompose.hpp"
#include "steroid/random.hpp"
#include "steroid/symtensor.hpp"

#include "test_helpers.hpp"

using steroid::Decomposition;
using steroid::ParseError;
using steroid::SymTensor;
using steroid::Term;

namespace {

SymTensor<double> example_tensor() {
  return SymTensor<double>::from_orbits(3, 2, {
      {{1, 1, 1}, 24.0},
      {{2, 1, 1}, 18.0},
      {{2, 2, 1}, 12.0},
      {{2, 2, 2}, 6.0},
  });
}

std::string tensor_text(const SymTensor<double>& t) {
  std::ostringstream out;
  steroid::write_tensor(out, t);
  return out.str();
}

}  // namespace

TEST(TensorIo, WriteGolden) {
  const std::string text = tensor_text(example_tensor());
  EXPECT_EQ(text,
            "symtensor 3 2\n"
            "1 1 1 24\n"
            "2 1 1 18\n"
            "2 2 1 12\n"
            "2 2 2 6\n");
}

TEST(TensorIo, RoundTripIsBitwise) {
  const SymTensor<double> t = steroid::random_symmetric(4, 3, 42u);
  const std::string text = tensor_text(t);
  std::istringstream in(text);
  const SymTensor<double> back = steroid::read_tensor<double>(in);
  ASSERT_EQ(back.order(), t.order());
  ASSERT_EQ(back.dim(), t.dim());
  ASSERT_EQ(back.data().size(), t.data().size());
  for (std::size_t i = 0; i < t.data().size(); ++i)
    EXPECT_EQ(back.data()[i], t.data()[i]);  // exact, 17 digits
  // writing the parsed tensor again reproduces the bytes
  EXPECT_EQ(tensor_text(back), text);
}

TEST(TensorIo, SkipsZeroOrbitsAndReadsThemBack) {
  const SymTensor<double> t = SymTensor<double>::from_orbits(2, 2, {
      {{1, 1}, 5.0},
      {{2, 2}, 0.0},
  });
  const std::string text = tensor_text(t);
  EXPECT_EQ(text, "symtensor 2 2\n1 1 5\n");
  std::istringstream in(text);
  const SymTensor<double> back = steroid::read_tensor<double>(in);
  EXPECT_EQ(back.at({2, 2}), 0.0);
  EXPECT_EQ(back.at({2, 1}), 0.0);
}

TEST(TensorIo, SeventeenDigitFidelity) {
  const double v = 1.0 / 3.0;
  const SymTensor<double> t =
      SymTensor<double>::from_dense_unchecked(1, 2, {v, v * 1e-7});
  std::istringstream in(tensor_text(t));
  const SymTensor<double> back = steroid::read_tensor<double>(in);
  EXPECT_EQ(back.data()[0], v);
  EXPECT_EQ(back.data()[1], v * 1e-7);
}

TEST(TensorIo, DenseBody) {
  std::istringstream in(
      "symtensor 2 2\n"
      "dense\n"
      "1 2\n"
      "2 3\n");
  const SymTensor<double> t = steroid::read_tensor<double>(in);
  EXPECT_EQ(t.at({1, 1}), 1.0);
  EXPECT_EQ(t.at({2, 1}), 2.0);
  EXPECT_EQ(t.at({2, 2}), 3.0);
}

TEST(TensorIo, DenseBodyWrongCount) {
  std::istringstream in("symtensor 2 2\ndense\n1 2 3\n");
  try {
    steroid::read_tensor<double>(in);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("values"), std::string::npos);
  }
}

TEST(TensorIo, DenseBodyAsymmetric) {
  std::istringstream in("symtensor 2 2\ndense\n1 2\n5 3\n");
  EXPECT_THROW(steroid::read_tensor<double>(in), steroid::SymmetryError);
}

TEST(TensorIo, HeaderErrorsCarryLineNumbers) {
  {
    std::istringstream in("wrong 3 2\n");
    try {
      steroid::read_tensor<double>(in);
      FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
      EXPECT_EQ(e.line(), 1);
      EXPECT_NE(std::string(e.what()).find("symtensor"), std::string::npos);
    }
  }
  {
    std::istringstream in("");
    EXPECT_THROW(steroid::read_tensor<double>(in), ParseError);
  }
  {
    std::istringstream in("symtensor 0 2\n");
    EXPECT_THROW(steroid::read_tensor<double>(in), ParseError);
  }
  {
    std::istringstream in("symtensor 3\n");
    EXPECT_THROW(steroid::read_tensor<double>(in), ParseError);
  }
}

TEST(TensorIo, BodyErrorsCarryLineNumbers) {
  {
    // second body line (file line 3) has a bad token
    std::istringstream in("symtensor 2 2\n\n1 1 5\n2 2 oops\n");
    try {
      steroid::read_tensor<double>(in);
      FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
      EXPECT_EQ(e.line(), 4);  // blank lines still count
    }
  }
  {
    // index out of range
    std::istringstream in("symtensor 2 2\n3 1 5\n");
    try {
      steroid::read_tensor<double>(in);
      FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
      EXPECT_EQ(e.line(), 2);
    }
  }
  {
    // wrong index count for the declared order
    std::istringstream in("symtensor 3 2\n1 1 5\n");
    EXPECT_THROW(steroid::read_tensor<double>(in), ParseError);
  }
}

TEST(TensorIo, ConflictingOrbitValues) {
  std::istringstream in("symtensor 2 2\n1 2 5\n2 1 6\n");
  EXPECT_THROW(steroid::read_tensor<double>(in), steroid::SymmetryError);
  std::istringstream ok("symtensor 2 2\n1 2 5\n2 1 5\n");
  EXPECT_EQ(steroid::read_tensor<double>(ok).at({1, 2}), 5.0);
}

TEST(DecompositionIo, RoundTripIsBitwise) {
  Decomposition<double> dec;
  dec.order = 3;
  dec.dim = 2;
  dec.terms.push_back(Term<double>{46.793556516720713, {0.83959871, 0.54314071}});
  dec.terms.push_back(Term<double>{-1.3915906536, {-0.54314071, 0.83959871}});
  dec.residual_norm = 2.4401567683257544e-14;

  std::ostringstream out;
  steroid::write_decomposition(out, dec);
  const std::string text = out.str();

  std::istringstream in(text);
  const Decomposition<double> back = steroid::read_decomposition<double>(in);
  EXPECT_EQ(back.order, 3);
  EXPECT_EQ(back.dim, 2);
  ASSERT_EQ(back.terms.size(), 2u);
  for (std::size_t j = 0; j < 2; ++j) {
    EXPECT_EQ(back.terms[j].lambda, dec.terms[j].lambda);
    EXPECT_EQ(back.terms[j].v, dec.terms[j].v);
  }
  EXPECT_EQ(back.residual_norm, dec.residual_norm);

  std::ostringstream out2;
  steroid::write_decomposition(out2, back);
  EXPECT_EQ(out2.str(), text);
}

TEST(DecompositionIo, GoldenLayout) {
  Decomposition<double> dec;
  dec.order = 2;
  dec.dim = 2;
  dec.terms.push_back(Term<double>{2.0, {1.0, 0.0}});
  dec.residual_norm = 0.0;
  std::ostringstream out;
  steroid::write_decomposition(out, dec);
  EXPECT_EQ(out.str(),
            "steroid-decomposition 2 2 1\n"
            "2 1 0\n"
            "residual 0\n");
}

TEST(DecompositionIo, MissingTrailerRejected) {
  std::istringstream in("steroid-decomposition 2 2 1\n2 1 0\n");
  EXPECT_THROW(steroid::read_decomposition<double>(in), ParseError);
}

TEST(DecompositionIo, ShortTermLineRejected) {
  std::istringstream in("steroid-decomposition 2 2 1\n2 1\nresidual 0\n");
  EXPECT_THROW(steroid::read_decomposition<double>(in), ParseError);
}

TEST(DecompositionIo, MissingTermLineRejected) {
  std::istringstream in("steroid-decomposition 2 2 2\n2 1 0\nresidual 0\n");
  EXPECT_THROW(steroid::read_decomposition<double>(in), ParseError);
}

TEST(DecompositionIo, BadHeaderRejected) {
  std::istringstream in("decomposition 2 2 1\n2 1 0\nresidual 0\n");
  try {
    steroid::read_decomposition<double>(in);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1);
  }
}

TEST(FileIo, PathWrappers) {
  testutil::TempDir dir("steroid-io-test");
  const std::string tpath = dir.file("t.steroid");
  const SymTensor<double> t = example_tensor();
  steroid::write_tensor_file(tpath, t);
  const SymTensor<double> back = steroid::read_tensor_file<double>(tpath);
  EXPECT_EQ(back.data(), t.data());
  EXPECT_THROW(steroid::read_tensor_file<double>(dir.file("absent.steroid")),
               ParseError);

  Decomposition<double> dec;
  dec.order = 1;
  dec.dim = 2;
  dec.terms.push_back(Term<double>{1.5, {0.6, 0.8}});
  dec.residual_norm = 0.0;
  const std::string dpath = dir.file("d.steroid");
  steroid::write_decomposition_file(dpath, dec);
  const Decomposition<double> dback = steroid::read_decomposition_file<double>(dpath);
  ASSERT_EQ(dback.terms.size(), 1u);
  EXPECT_EQ(dback.terms[0].lambda, 1.5);
  EXPECT_THROW(steroid::read_decomposition_file<double>(dir.file("absent")),
               ParseError);
}
