#include "parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace steinspc::detail {

unsigned resolve_workers(unsigned requested) noexcept
{
    if (requested > 0)
        return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, unsigned workers, std::function<void(std::size_t)> const& body)
{
    if (n == 0)
        return;
    unsigned const threads
        = static_cast<unsigned>(std::min<std::size_t>(resolve_workers(workers), n));
    if (threads == 1)
    {
        for (std::size_t i = 0; i < n; ++i)
            body(i);
        return;
    }

    constexpr std::size_t chunk = 16;
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto worker = [&] {
        for (;;)
        {
            std::size_t const begin = next.fetch_add(chunk);
            if (begin >= n)
                return;
            std::size_t const end = std::min(n, begin + chunk);
            try
            {
                for (std::size_t i = begin; i < end; ++i)
                    body(i);
            }
            catch (...)
            {
                std::lock_guard lock(error_mutex);
                if (!error)
                    error = std::current_exception();
                next.store(n);
                return;
            }
        }
    };

    std::vector<std::jthread> pool;
    pool.reserve(threads - 1);
    for (unsigned t = 1; t < threads; ++t)
        pool.emplace_back(worker);
    worker();
    pool.clear();
    if (error)
        std::rethrow_exception(error);
}

}  // namespace steinspc::detail
