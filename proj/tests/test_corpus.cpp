#include <doctest.h>

#include "vartopic/corpus.hpp"
#include "vartopic/distributions.hpp"
#include "vartopic/errors.hpp"

#include <cmath>
#include <map>
#include <sstream>

using namespace vartopic;

namespace {

TripletCorpus csv(const std::string& text) {
    std::istringstream in(text);
    return read_triplets(in, TripletFormat::csv);
}

} // namespace

TEST_CASE("duplicate rows are summed") {
    const auto c = csv("doc,term,n\nd1,t1,2\nd1,t1,3\nd2,t2,1\n");
    REQUIRE(c.size() == 2);
    CHECK(c.triplets()[0] == Triplet{"d1", "t1", 5.0});
    CHECK(c.triplets()[1] == Triplet{"d2", "t2", 1.0});
    CHECK(c.docs() == std::vector<std::string>{"d1", "d2"});
}

TEST_CASE("empty input gives an empty corpus") {
    const auto only_header = csv("doc,term,n\n");
    CHECK(only_header.empty());
    CHECK(only_header.docs().empty());
    CHECK(only_header.terms().empty());
    const auto nothing = csv("");
    CHECK(nothing.empty());
}

TEST_CASE("negative values are rejected") {
    CHECK_THROWS_AS(csv("doc,term,n\nd1,t1,-1\n"), ValidationError);
    const std::vector<Triplet> t{{"a", "b", std::nan("")}};
    CHECK_THROWS_AS(TripletCorpus::from_triplets(t), ValidationError);
}

TEST_CASE("malformed rows name their line") {
    try {
        csv("doc,term,n\nd1,t1,2\nd1,t1\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
    }
    CHECK_THROWS_AS(csv("doc,term,n\nd1,t1,abc\n"), ParseError);
}

TEST_CASE("jsonl input") {
    std::istringstream in("{\"doc\":\"d1\",\"term\":\"t1\",\"n\":2}\n{\"doc\":\"d2\",\"term\":\"t1\",\"n\":4}\n");
    const auto c = read_triplets(in, TripletFormat::jsonl);
    CHECK(c.size() == 2);
    CHECK(c.total() == 6.0);
}

TEST_CASE("format from extension") {
    CHECK(format_from_extension("a.csv") == TripletFormat::csv);
    CHECK(format_from_extension("a.jsonl") == TripletFormat::jsonl);
    CHECK_THROWS_AS(format_from_extension("a.txt"), ValidationError);
}

TEST_CASE("log1p transform") {
    const std::vector<Triplet> t{{"d", "a", 0.0}, {"d", "b", std::exp(1.0) - 1.0}, {"d", "c", 5.0}};
    const auto c = log1p_transform(TripletCorpus::from_triplets(t));
    const auto out = c.triplets();
    REQUIRE(out.size() == 3);
    CHECK(out[0].value == 0.0);
    CHECK(out[1].value == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(out[2].value == doctest::Approx(1.791759469228055).epsilon(1e-15));

    const auto twice = log1p_transform(c).triplets();
    CHECK(twice[2].value == doctest::Approx(std::log1p(std::log1p(5.0))).epsilon(1e-15));
}

TEST_CASE("build_matrix and its transpose") {
    const std::vector<Triplet> t{{"d1", "t1", 5.0}, {"d2", "t2", 1.0}};
    const auto c = TripletCorpus::from_triplets(t);
    const auto m = build_matrix(c, MatrixRows::doc);
    Eigen::MatrixXd expected(2, 2);
    expected << 5, 0, 0, 1;
    CHECK(m.to_dense() == expected);
    CHECK(m.row_names() == std::vector<std::string>{"d1", "d2"});
    const auto mt = build_matrix(c, MatrixRows::term);
    CHECK(mt.to_dense() == expected.transpose());
    CHECK(mt.row_names() == std::vector<std::string>{"t1", "t2"});
}

TEST_CASE("load, build, flatten round trip") {
    const auto c = csv("doc,term,n\nd2,x,1\nd1,y,2\nd1,x,3\nd2,x,4\nd3,z,0.5\nd3,y,0\n");
    const auto m = build_matrix(c);
    CHECK(m.values().sum() == doctest::Approx(c.total()).epsilon(1e-12));
    std::map<std::pair<std::string, std::string>, double> before, after;
    for (const auto& t : c.triplets())
        if (t.value != 0.0)
            before[{t.doc, t.term}] += t.value;
    for (const auto& t : flatten(m).triplets())
        after[{t.doc, t.term}] += t.value;
    CHECK(before == after);
}

TEST_CASE("sorted reorders indices lexicographically") {
    const auto c = csv("doc,term,n\nb,y,1\na,x,2\n").sorted();
    CHECK(c.docs() == std::vector<std::string>{"a", "b"});
    CHECK(c.terms() == std::vector<std::string>{"x", "y"});
}

TEST_CASE("write and read triplets") {
    const auto c = csv("doc,term,n\n\"a,b\",x,1.5\nd,y,2\n");
    std::ostringstream out;
    write_triplets(out, c);
    const auto back = csv(out.str());
    CHECK(back.triplets() == c.triplets());
}

TEST_CASE("complete_terms fills gaps with zeros") {
    TopicDistributions td{DistributionKind::beta,
                          {{"1", "V01", 0.5, std::nullopt}, {"3", "V01", 0.5, std::nullopt}},
                          {}};
    const std::vector<std::string> vocab{"1", "2", "3", "4"};
    const auto done = complete_terms(td, vocab);
    REQUIRE(done.entries.size() == 4);
    double sum = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(done.entries[i].id == vocab[i]);
        sum += done.entries[i].probability;
    }
    CHECK(done.entries[1].probability == 0.0);
    CHECK(done.entries[3].probability == 0.0);
    CHECK(sum == 1.0);

    const auto again = complete_terms(done, vocab);
    CHECK(again.entries.size() == done.entries.size());
    for (std::size_t i = 0; i < again.entries.size(); ++i)
        CHECK(again.entries[i].probability == done.entries[i].probability);

    TopicDistributions stray{DistributionKind::beta, {{"9", "V01", 1.0, std::nullopt}}, {}};
    CHECK_THROWS_AS(complete_terms(stray, vocab), ValidationError);
}

TEST_CASE("distribution csv round trip") {
    TopicDistributions td{DistributionKind::gamma,
                          {{"d1", "V01", 0.25, 0.1}, {"d1", "V02", 0.75, 0.9}},
                          {}};
    std::ostringstream out;
    write_distributions(out, td);
    std::istringstream in(out.str());
    const auto back = read_distributions(in, DistributionKind::gamma);
    REQUIRE(back.entries.size() == 2);
    CHECK(back.has_renormalized());
    CHECK(back.entries[1].probability == 0.75);
    CHECK(*back.entries[1].renormalized == 0.9);
}

TEST_CASE("topic labels") {
    CHECK(topic_label(0) == "V01");
    CHECK(topic_label(9) == "V10");
    CHECK(topic_label(99) == "V100");
}
