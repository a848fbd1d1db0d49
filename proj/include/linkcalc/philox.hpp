#pragma once

#include <cstdint>

namespace linkcalc {

// Philox4x32-10 counter-based generator (Salmon et al., SC 2011).
//
// Every Monte Carlo draw is keyed by (seed, stream, sample_index, inner
// counter), so the value of sample i never depends on how samples are
// partitioned across worker threads.
class Philox {
  public:
    Philox(std::uint64_t seed, std::uint32_t stream, std::uint64_t sample_index)
        : key0_(static_cast<std::uint32_t>(seed)),
          key1_(static_cast<std::uint32_t>(seed >> 32)),
          ctr0_(static_cast<std::uint32_t>(sample_index)),
          ctr1_(static_cast<std::uint32_t>(sample_index >> 32)),
          ctr2_(0), ctr3_(stream) {}

    // Uniform on the open interval (0,1); safe under log().
    double uniform() {
        if (have_ == 0) fill();
        std::uint32_t hi = buf_[--have_];
        std::uint32_t lo = buf_[--have_];
        std::uint64_t x = (static_cast<std::uint64_t>(hi) << 32) | lo;
        return (static_cast<double>(x >> 11) + 0.5) * 0x1.0p-53;
    }

  private:
    static constexpr std::uint32_t kM0 = 0xD2511F53u;
    static constexpr std::uint32_t kM1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kW0 = 0x9E3779B9u;
    static constexpr std::uint32_t kW1 = 0xBB67AE85u;

    static void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo, std::uint32_t& hi) {
        std::uint64_t p = static_cast<std::uint64_t>(a) * b;
        lo = static_cast<std::uint32_t>(p);
        hi = static_cast<std::uint32_t>(p >> 32);
    }

    void fill() {
        std::uint32_t c0 = ctr0_, c1 = ctr1_, c2 = ctr2_, c3 = ctr3_;
        std::uint32_t k0 = key0_, k1 = key1_;
        for (int round = 0; round < 10; ++round) {
            std::uint32_t lo0, hi0, lo1, hi1;
            mulhilo(kM0, c0, lo0, hi0);
            mulhilo(kM1, c2, lo1, hi1);
            std::uint32_t n0 = hi1 ^ c1 ^ k0;
            std::uint32_t n1 = lo1;
            std::uint32_t n2 = hi0 ^ c3 ^ k1;
            std::uint32_t n3 = lo0;
            c0 = n0; c1 = n1; c2 = n2; c3 = n3;
            k0 += kW0;
            k1 += kW1;
        }
        buf_[0] = c0; buf_[1] = c1; buf_[2] = c2; buf_[3] = c3;
        have_ = 4;
        ++ctr2_; // inner counter: next block within the same sample's stream
    }

    std::uint32_t key0_, key1_;
    std::uint32_t ctr0_, ctr1_, ctr2_, ctr3_;
    std::uint32_t buf_[4] = {0, 0, 0, 0};
    int have_ = 0;
};

} // namespace linkcalc
