#pragma once

#include <cerrno>
#include <cstring>
#include <optional>
#include <string>
#include <vector>

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include "scrawl/error.hpp"

namespace scrawl {

// Splits a command line into argv words. Double and single quotes group
// words; backslash escapes the next character outside single quotes.
inline std::vector<std::string> split_command_line(const std::string& cmd) {
    std::vector<std::string> argv;
    std::string cur;
    bool in_word = false;
    char quote = 0;
    for (size_t i = 0; i < cmd.size(); ++i) {
        const char c = cmd[i];
        if (quote == '\'') {
            if (c == '\'') quote = 0;
            else cur.push_back(c);
            continue;
        }
        if (c == '\\' && i + 1 < cmd.size()) {
            cur.push_back(cmd[++i]);
            in_word = true;
            continue;
        }
        if (quote == '"') {
            if (c == '"') quote = 0;
            else cur.push_back(c);
            continue;
        }
        if (c == '\'' || c == '"') {
            quote = c;
            in_word = true;
            continue;
        }
        if (c == ' ' || c == '\t') {
            if (in_word || !cur.empty()) {
                argv.push_back(cur);
                cur.clear();
                in_word = false;
            }
            continue;
        }
        cur.push_back(c);
        in_word = true;
    }
    if (in_word || !cur.empty()) argv.push_back(cur);
    return argv;
}

// A child process with piped stdin/stdout. exec failures are reported
// through a CLOEXEC pipe, so a bad command raises SpawnFailure instead of
// silently producing an empty stream.
class ChildProcess {
public:
    ChildProcess(const ChildProcess&) = delete;
    ChildProcess& operator=(const ChildProcess&) = delete;

    explicit ChildProcess(const std::string& command_line) {
        // a child hanging up must surface as a write error, not SIGPIPE
        static const bool sigpipe_ignored = [] {
            signal(SIGPIPE, SIG_IGN);
            return true;
        }();
        (void)sigpipe_ignored;

        const std::vector<std::string> argv = split_command_line(command_line);
        if (argv.empty()) throw Error(ErrorCode::SpawnFailure, "empty command line");

        int in_pipe[2];  // parent -> child stdin
        int out_pipe[2]; // child stdout -> parent
        int err_pipe[2]; // exec errno channel
        if (pipe(in_pipe) != 0 || pipe(out_pipe) != 0 || pipe(err_pipe) != 0) {
            throw Error(ErrorCode::SpawnFailure, std::strerror(errno));
        }
        fcntl(err_pipe[1], F_SETFD, FD_CLOEXEC);

        pid_ = fork();
        if (pid_ < 0) throw Error(ErrorCode::SpawnFailure, std::strerror(errno));

        if (pid_ == 0) {
            dup2(in_pipe[0], STDIN_FILENO);
            dup2(out_pipe[1], STDOUT_FILENO);
            close(in_pipe[0]);
            close(in_pipe[1]);
            close(out_pipe[0]);
            close(out_pipe[1]);
            close(err_pipe[0]);

            std::vector<char*> cargv;
            for (const std::string& a : argv) cargv.push_back(const_cast<char*>(a.c_str()));
            cargv.push_back(nullptr);
            execvp(cargv[0], cargv.data());
            const int err = errno;
            ssize_t ignored = write(err_pipe[1], &err, sizeof(err));
            (void)ignored;
            _exit(127);
        }

        close(in_pipe[0]);
        close(out_pipe[1]);
        close(err_pipe[1]);
        stdin_fd_ = in_pipe[1];
        stdout_fd_ = out_pipe[0];

        int child_errno = 0;
        const ssize_t n = read(err_pipe[0], &child_errno, sizeof(child_errno));
        close(err_pipe[0]);
        if (n > 0) {
            wait_exit();
            close_fds();
            throw Error(ErrorCode::SpawnFailure,
                        argv[0] + ": " + std::strerror(child_errno));
        }
    }

    ~ChildProcess() {
        close_fds();
        if (pid_ > 0 && !waited_) {
            kill(pid_, SIGKILL);
            wait_exit();
        }
    }

    void write_line(const std::string& line) {
        std::string buf = line;
        buf.push_back('\n');
        size_t off = 0;
        while (off < buf.size()) {
            const ssize_t n = write(stdin_fd_, buf.data() + off, buf.size() - off);
            if (n < 0) {
                if (errno == EINTR) continue;
                throw Error(ErrorCode::ProtocolError,
                            std::string("write to child failed: ") + std::strerror(errno));
            }
            off += static_cast<size_t>(n);
        }
    }

    void close_stdin() {
        if (stdin_fd_ >= 0) {
            close(stdin_fd_);
            stdin_fd_ = -1;
        }
    }

    // Reads one newline-terminated line. timeout_ms < 0 blocks indefinitely.
    // nullopt on EOF; Error(Timeout) if the deadline passes first.
    std::optional<std::string> read_line(int timeout_ms = -1) {
        while (true) {
            const size_t nl = buffer_.find('\n');
            if (nl != std::string::npos) {
                std::string line = buffer_.substr(0, nl);
                buffer_.erase(0, nl + 1);
                if (!line.empty() && line.back() == '\r') line.pop_back();
                return line;
            }
            if (eof_) {
                if (buffer_.empty()) return std::nullopt;
                std::string line = std::move(buffer_);
                buffer_.clear();
                return line;
            }

            struct pollfd pfd{stdout_fd_, POLLIN, 0};
            const int pr = poll(&pfd, 1, timeout_ms);
            if (pr < 0) {
                if (errno == EINTR) continue;
                throw Error(ErrorCode::ProtocolError,
                            std::string("poll failed: ") + std::strerror(errno));
            }
            if (pr == 0) throw Error(ErrorCode::Timeout, "no response from child");

            char chunk[4096];
            const ssize_t n = read(stdout_fd_, chunk, sizeof(chunk));
            if (n < 0) {
                if (errno == EINTR) continue;
                throw Error(ErrorCode::ProtocolError,
                            std::string("read from child failed: ") + std::strerror(errno));
            }
            if (n == 0) {
                eof_ = true;
                continue;
            }
            buffer_.append(chunk, static_cast<size_t>(n));
        }
    }

    // Waits for the child and returns its wait(2) status.
    int wait_exit() {
        if (!waited_) {
            int status = 0;
            while (waitpid(pid_, &status, 0) < 0 && errno == EINTR) {
            }
            status_ = status;
            waited_ = true;
        }
        return status_;
    }

    bool exited_cleanly() {
        const int st = wait_exit();
        return WIFEXITED(st) && WEXITSTATUS(st) == 0;
    }

    std::string exit_description() {
        const int st = wait_exit();
        if (WIFEXITED(st)) return "exit status " + std::to_string(WEXITSTATUS(st));
        if (WIFSIGNALED(st)) return std::string("killed by signal ") + std::to_string(WTERMSIG(st));
        return "unknown exit";
    }

    bool alive() const {
        if (pid_ <= 0 || waited_) return false;
        return kill(pid_, 0) == 0;
    }

private:
    void close_fds() {
        close_stdin();
        if (stdout_fd_ >= 0) {
            close(stdout_fd_);
            stdout_fd_ = -1;
        }
    }

    pid_t pid_ = -1;
    int stdin_fd_ = -1;
    int stdout_fd_ = -1;
    std::string buffer_;
    bool eof_ = false;
    bool waited_ = false;
    int status_ = 0;
};

} // namespace scrawl
