#include <benchmark/benchmark.h>

#include <string>

#include "qaedit/metrics.hpp"
#include "qaedit/text.hpp"

namespace {

std::string make_paragraph(int sentences) {
    std::string text;
    for (int i = 0; i < sentences; ++i) {
        text += "The committee reviewed proposal number " + std::to_string(i) +
                " during the annual session in Vienna. ";
    }
    return text;
}

void BM_Tokenize(benchmark::State& state) {
    std::string text = make_paragraph(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(qaedit::tokenize(text));
    }
    state.SetBytesProcessed(state.iterations() * static_cast<int64_t>(text.size()));
}
BENCHMARK(BM_Tokenize)->Arg(8)->Arg(64);

void BM_SplitSentences(benchmark::State& state) {
    std::string text = make_paragraph(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(qaedit::split_sentences(text));
    }
}
BENCHMARK(BM_SplitSentences)->Arg(8)->Arg(64);

void BM_F1(benchmark::State& state) {
    std::vector<std::string> golds = {"the Talbot Hughes collection of 1913"};
    std::string pred = "it was the Talbot Hughes costume collection received in 1913";
    for (auto _ : state) {
        benchmark::DoNotOptimize(qaedit::f1(pred, golds));
    }
}
BENCHMARK(BM_F1);

}  // namespace

BENCHMARK_MAIN();
