#ifndef SZLAB_CORE_HPP
#define SZLAB_CORE_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <complex>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace szlab {

using Eigen::Index;

template <typename Scalar>
using Complex = std::complex<Scalar>;

template <typename Scalar>
using CArray = Eigen::Array<std::complex<Scalar>, Eigen::Dynamic, 1>;

template <typename Scalar>
using RArray = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

// Rows index the x (or xi) axis, columns the y (or eta) axis.
template <typename Scalar>
using CField = Eigen::Array<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename Scalar>
using CMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
constexpr Scalar pi_v = Scalar(3.141592653589793238462643383279502884L);

class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Sign { Plus, Minus };

// Worker count for fiber maps. SZG_THREADS seeds the default.
inline std::atomic<int>& thread_setting()
{
    static std::atomic<int> n{[] {
        if (const char* env = std::getenv("SZG_THREADS")) {
            int v = std::atoi(env);
            if (v > 0)
                return v;
        }
        return 1;
    }()};
    return n;
}

inline void set_num_threads(int n) { thread_setting() = std::max(1, n); }
inline int num_threads() { return thread_setting().load(); }

// Static block partition, so results never depend on scheduling.
template <typename Fn>
void parallel_for(Index count, Fn&& fn)
{
    const int workers = static_cast<int>(std::min<Index>(num_threads(), count));
    if (workers <= 1) {
        for (Index i = 0; i < count; ++i)
            fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (Index i = w * count / workers; i < (w + 1) * count / workers; ++i)
                    fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool)
        t.join();
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

} // namespace szlab

#endif
