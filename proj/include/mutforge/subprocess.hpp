#pragma once

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <csignal>
#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

#include "mutforge/errors.hpp"

namespace mutforge {

struct ProcessResult {
    int exit_code = -1; // 128+signal when killed by a signal
    bool timed_out = false;
    std::int64_t duration_ms = 0;
    std::string output; // interleaved stdout+stderr, capped
};

namespace detail {

inline constexpr std::size_t kOutputCap = 4 * 1024 * 1024;

inline std::int64_t steady_ms() {
    auto now = std::chrono::steady_clock::now().time_since_epoch();
    return std::chrono::duration_cast<std::chrono::milliseconds>(now).count();
}

} // namespace detail

// Runs argv in `cwd` with a wall-clock deadline. The child gets its own
// process group (setsid), and the whole group is SIGKILLed on timeout and
// again after exit so test-spawned grandchildren never outlive the run.
inline ProcessResult run_process(const std::vector<std::string>& argv, const std::string& cwd,
                                 std::int64_t timeout_ms) {
    if (argv.empty()) throw SandboxError("empty command");

    int pipe_fds[2];
    if (pipe(pipe_fds) != 0) throw SandboxError("pipe failed: " + std::string(strerror(errno)));

    std::int64_t start = detail::steady_ms();
    pid_t pid = fork();
    if (pid < 0) {
        close(pipe_fds[0]);
        close(pipe_fds[1]);
        throw SandboxError("fork failed: " + std::string(strerror(errno)));
    }

    if (pid == 0) {
        setsid();
        close(pipe_fds[0]);
        dup2(pipe_fds[1], STDOUT_FILENO);
        dup2(pipe_fds[1], STDERR_FILENO);
        close(pipe_fds[1]);
        if (!cwd.empty() && chdir(cwd.c_str()) != 0) _exit(127);
        std::vector<char*> args;
        args.reserve(argv.size() + 1);
        for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
        args.push_back(nullptr);
        execvp(args[0], args.data());
        _exit(127);
    }

    close(pipe_fds[1]);
    int fd = pipe_fds[0];
    fcntl(fd, F_SETFL, O_NONBLOCK);

    ProcessResult result;
    std::int64_t deadline = start + timeout_ms;
    bool reaped = false;
    int status = 0;
    char buf[8192];

    auto drain = [&] {
        while (true) {
            ssize_t n = read(fd, buf, sizeof buf);
            if (n <= 0) break;
            if (result.output.size() < detail::kOutputCap)
                result.output.append(buf, buf + static_cast<std::size_t>(n));
        }
    };

    while (!reaped) {
        std::int64_t remaining = deadline - detail::steady_ms();
        if (remaining <= 0 && !result.timed_out) {
            kill(-pid, SIGKILL);
            result.timed_out = true;
        }
        pollfd pfd{fd, POLLIN, 0};
        int wait_ms = result.timed_out ? 50 : static_cast<int>(std::min<std::int64_t>(remaining, 50));
        poll(&pfd, 1, wait_ms < 0 ? 0 : wait_ms);
        drain();
        pid_t w = waitpid(pid, &status, WNOHANG);
        if (w == pid) reaped = true;
        if (w < 0) throw SandboxError("waitpid failed: " + std::string(strerror(errno)));
    }
    drain();
    close(fd);
    kill(-pid, SIGKILL); // sweep any process-group stragglers

    result.duration_ms = detail::steady_ms() - start;
    if (WIFEXITED(status))
        result.exit_code = WEXITSTATUS(status);
    else if (WIFSIGNALED(status))
        result.exit_code = 128 + WTERMSIG(status);
    if (result.output.size() >= detail::kOutputCap) result.output += "\n...[output truncated]";
    return result;
}

} // namespace mutforge
