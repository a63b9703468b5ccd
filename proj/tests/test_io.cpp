#include <gtest/gtest.h>

#include "simplexsp/io.hpp"
#include "simplexsp/synthetic.hpp"

using namespace simplexsp;

TEST(EdgeCsv, ParsesWithHeaderAndComments) {
  const auto x = io::parse_edge_csv("u,v,w\n# comment\n1,2,0.5\n\n2,3,1\n3, 1 ,2\n");
  EXPECT_EQ(x.graph().edge_count(), 3u);
  EXPECT_EQ(x.vertices(), (std::vector<VertexId>{1, 2, 3}));
  EXPECT_EQ(*x.graph().weight(0, 2), 2.0);

  const auto inv = io::parse_edge_csv("1,2,4\n2,3\n", "<e>", true);
  EXPECT_EQ(*inv.graph().weight(0, 1), 0.25);
  EXPECT_EQ(*inv.graph().weight(1, 2), 1.0);
}

TEST(EdgeCsv, ErrorsCarryPosition) {
  try {
    io::parse_edge_csv("1,2\n2,x\n", "e.csv");
    FAIL();
  } catch (const io::ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.column(), 3u);
    EXPECT_NE(std::string(e.what()).find("e.csv:2:3"), std::string::npos);
  }
  EXPECT_THROW(io::parse_edge_csv("1,2,3,4\n"), io::ParseError);
  EXPECT_THROW(io::parse_edge_csv("1,1\n"), io::ParseError);
  EXPECT_THROW(io::parse_edge_csv("1,2,-1\n"), io::ParseError);
  EXPECT_THROW(io::parse_edge_csv("1,2,1\n2,1,3\n"), ValidationError);
}

TEST(SignalCsv, HeaderIdsAndErrors) {
  const std::vector<VertexId> ids{10, 20, 30};
  const auto s = io::parse_signal_csv("vertex,a,b\n30,3,6\n10,1,4\n20,2,5\n", ids);
  EXPECT_EQ(s.rows(), 3);
  EXPECT_EQ(s(0, 0), 1.0);
  EXPECT_EQ(s(2, 1), 6.0);
  const auto plain = io::parse_signal_csv("1\n2\n3\n", ids);
  EXPECT_EQ(plain(1, 0), 2.0);

  try {
    io::parse_signal_csv("1,2\n3\n4,5\n", ids, "s.csv");
    FAIL();
  } catch (const io::ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.column(), 1u);
  }
  EXPECT_THROW(io::parse_signal_csv("id,a\n10,1\n40,2\n20,3\n", ids), io::ParseError);
  EXPECT_THROW(io::parse_signal_csv("id,a\n10,1\n10,2\n20,3\n", ids), io::ParseError);
  EXPECT_THROW(io::parse_signal_csv("1\n2\n", ids), ValidationError);
}

TEST(ComplexJson, FaceClosureAndKeys) {
  const auto ok = io::complex_from_json(io::parse_json(
      R"({"edges": [[1, 2], [2, 3, 2.0], [1, 3]], "simplices": [[1, 2, 3]], "vertices": [9]})", "c.json"));
  EXPECT_EQ(ok.size(), 4u);
  EXPECT_EQ(ok.triangles().size(), 1u);
  EXPECT_THROW(io::complex_from_json(io::parse_json(R"({"edges": [[1, 2], [2, 3]], "simplices": [[1, 2, 3]]})", "c")),
               ValidationError);
  EXPECT_THROW(io::complex_from_json(io::parse_json(R"({"edge": []})", "c")), ValidationError);
  EXPECT_THROW(io::complex_from_json(io::parse_json(R"({"edges": [[1, 2, 0]]})", "c")), ValidationError);
  try {
    io::parse_json("{\n  \"edges\": [1,\n}", "bad.json");
    FAIL();
  } catch (const io::ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(RoundTrip, ComplexGraphSignals) {
  const auto g = synthetic::random_knn_graph(25, 4, 3);
  std::vector<Simplex> tris;
  for (const auto& t : enumerate_candidate_triangles(g)) tris.push_back({t[0], t[1], t[2]});
  tris.resize(tris.size() / 2);
  const SimplicialComplex x(g, tris);

  const auto back = io::complex_from_json(io::parse_json(io::complex_to_json(x).dump(), "x"));
  EXPECT_EQ(back.graph(), x.graph());
  EXPECT_EQ(back.simplices(), x.simplices());
  EXPECT_TRUE(complex_laplacian(back).matrix == complex_laplacian(x).matrix);

  EXPECT_EQ(io::parse_edge_csv(io::edge_csv(g)).graph(), g);

  Eigen::MatrixXd s = Eigen::MatrixXd::Random(25, 3) * 1e3;
  s(0, 0) = 0.1;
  const auto read = io::parse_signal_csv(io::signals_csv(s, g.vertices()), g.vertices());
  EXPECT_TRUE(read == s);
  EXPECT_TRUE(io::parse_matrix_csv(io::matrix_csv(s)) == s);
}

TEST(Manifest, FamilyIsByteIdentical) {
  const auto g = synthetic::random_knn_graph(40, 5, 2);
  FamilyOptions opt;
  opt.p = 5;
  opt.bands = 5;
  const std::string a = io::family_manifest(build_family(g, opt), opt).dump(2);
  const std::string b = io::family_manifest(build_family(g, opt), opt).dump(2);
  EXPECT_EQ(a, b);
  const auto j = io::Json::parse(a);
  EXPECT_EQ(j["levels"].size(), 6u);
  EXPECT_EQ(j["queue"].size(), enumerate_candidate_triangles(g).size());
}

TEST(Format, ShortestRoundTrip) {
  EXPECT_EQ(io::format_double(0.1), "0.1");
  EXPECT_EQ(io::format_double(1.0), "1");
  EXPECT_EQ(io::hex64(0xabcULL), "0000000000000abc");
}
