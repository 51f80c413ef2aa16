#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "qaedit/errors.hpp"
#include "qaedit/metrics.hpp"

using namespace qaedit;

TEST_CASE("normalize") {
    CHECK(normalize("The  V&A.") == "v&a");
    CHECK(normalize("") == "");
    CHECK(normalize("1913") == "1913");
    CHECK(normalize("An Apple, a day") == "apple day");
}

TEST_CASE("f1 hand cases") {
    CHECK(f1("1913", {"1913"}) == doctest::Approx(1.0));
    CHECK(f1("in 1913", {"1913"}) == doctest::Approx(2.0 / 3.0));
    CHECK(f1("autumn", {"winter"}) == doctest::Approx(0.0));
    CHECK(f1("", {""}) == doctest::Approx(1.0));
    CHECK(f1("", {"1913"}) == doctest::Approx(0.0));
}

TEST_CASE("exact_match") {
    CHECK(exact_match("The 1913", {"1913"}) == 1);
    CHECK(exact_match("1913.", {"1913"}) == 1);
    CHECK(exact_match("in 1913", {"1913"}) == 0);
}

TEST_CASE("inclusion_match") {
    CHECK(inclusion_match("the answer is 1913", {"1913"}) == 1);
    CHECK(inclusion_match("1912", {"1913"}) == 0);
    CHECK(inclusion_match("endowments and grants", {"endowments"}) == 1);
}

TEST_CASE("im_diff") {
    MetricsReport natural, edited;
    natural.dataset_id = edited.dataset_id = "squad";
    natural.mean_im = 95.6;
    edited.mean_im = 75.7;
    CHECK(im_diff(natural, edited) == doctest::Approx(-19.9));

    natural.mean_im = edited.mean_im = 50.0;
    CHECK(im_diff(natural, edited) == doctest::Approx(0.0));

    natural.mean_im = 83.4;
    edited.mean_im = 42.9;
    CHECK(im_diff(natural, edited) == doctest::Approx(-40.5));

    edited.dataset_id = "newsqa";
    CHECK_THROWS_AS(im_diff(natural, edited), IdMismatch);
}

TEST_CASE("is_misled truth table") {
    std::vector<std::string> gold = {"1913"};
    CHECK(is_misled("1913", "1912", gold, gold));        // correct -> incorrect
    CHECK_FALSE(is_misled("1913", "1913", gold, gold));  // correct -> correct
    CHECK_FALSE(is_misled("1912", "1911", gold, gold));  // incorrect -> incorrect
    CHECK_FALSE(is_misled("1912", "1913", gold, gold));  // incorrect -> correct
}

namespace {

std::string random_answer(std::mt19937& rng) {
    const std::vector<std::string> vocab = {"1913", "autumn", "the",  "V&A",  "castle",
                                            "seven", "blue",  "king", "Dr.", "in"};
    std::uniform_int_distribution<int> len(0, 4);
    std::uniform_int_distribution<std::size_t> pick(0, vocab.size() - 1);
    std::string out;
    int n = len(rng);
    for (int i = 0; i < n; ++i) {
        if (i) out += " ";
        out += vocab[pick(rng)];
    }
    return out;
}

}  // namespace

TEST_CASE("em implies im and f1 = 1 on random pairs") {
    std::mt19937 rng(23);
    for (int trial = 0; trial < 500; ++trial) {
        std::string pred = random_answer(rng);
        std::vector<std::string> golds = {random_answer(rng)};
        int em = exact_match(pred, golds);
        int im = inclusion_match(pred, golds);
        CHECK(em <= im);
        if (em == 1) CHECK(f1(pred, golds) == doctest::Approx(1.0));
    }
}

TEST_CASE("f1 invariant under prediction token permutation") {
    std::mt19937 rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        std::string pred = random_answer(rng);
        std::vector<std::string> golds = {random_answer(rng)};
        std::istringstream in(pred);
        std::vector<std::string> words{std::istream_iterator<std::string>(in),
                                       std::istream_iterator<std::string>()};
        std::shuffle(words.begin(), words.end(), rng);
        std::string shuffled;
        for (const auto& w : words) {
            if (!shuffled.empty()) shuffled += " ";
            shuffled += w;
        }
        CHECK(f1(pred, golds) == doctest::Approx(f1(shuffled, golds)));
    }
}

TEST_CASE("aggregate equals a brute-force fold") {
    std::mt19937 rng(41);
    std::vector<ScoredAnswer> scored;
    double f = 0, e = 0, m = 0;
    for (int i = 0; i < 57; ++i) {
        auto s = score_answer(random_answer(rng), {random_answer(rng)});
        f += s.f1;
        e += s.em;
        m += s.im;
        scored.push_back(std::move(s));
    }
    auto report = aggregate("d", "natural", scored);
    CHECK(report.n == 57);
    CHECK(report.mean_f1 == doctest::Approx(100.0 * f / 57).epsilon(1e-12));
    CHECK(report.mean_em == doctest::Approx(100.0 * e / 57).epsilon(1e-12));
    CHECK(report.mean_im == doctest::Approx(100.0 * m / 57).epsilon(1e-12));
}
