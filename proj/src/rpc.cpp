#include "bridgescope/rpc.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <istream>
#include <mutex>
#include <ostream>
#include <thread>
#include <vector>

#include "bridgescope/errors.hpp"

namespace bs {
namespace {

json make_error(const json& id, int code, const std::string& message,
                const std::string& error_code = "") {
    json err{{"code", code}, {"message", message}};
    if (!error_code.empty()) err["data"] = json{{"error_code", error_code}};
    return json{{"jsonrpc", "2.0"}, {"id", id}, {"error", err}};
}

json make_result(const json& id, json result) {
    return json{{"jsonrpc", "2.0"}, {"id", id}, {"result", std::move(result)}};
}

}  // namespace

std::optional<json> RpcEndpoint::handle_message(const json& request) {
    json id = request.contains("id") ? request["id"] : json(nullptr);
    bool notification = !request.contains("id");
    if (!request.is_object() || request.value("jsonrpc", "") != "2.0" ||
        !request.contains("method") || !request["method"].is_string()) {
        if (notification) return std::nullopt;
        return make_error(id, -32600, "invalid request");
    }
    std::string method = request["method"].get<std::string>();
    json params = request.value("params", json::object());
    json result;
    try {
        std::lock_guard lock(session_->exec_mutex());
        if (method == "tools/list") {
            json tools = json::array();
            for (const ToolDescriptor& d : registry_.list_tools(*session_))
                tools.push_back(d.to_json());
            result = json{{"tools", std::move(tools)}};
        } else if (method == "tools/call") {
            if (!params.is_object() || !params.contains("name") ||
                !params["name"].is_string()) {
                if (notification) return std::nullopt;
                return make_error(id, -32602, "params need a tool \"name\"");
            }
            json payload = registry_.call_tool(*session_,
                                               params["name"].get<std::string>(),
                                               params.value("arguments", json()));
            result = json{{"payload", std::move(payload)}};
        } else {
            if (notification) return std::nullopt;
            return make_error(id, -32601, "method not found: " + method);
        }
    } catch (const ToolError& e) {
        if (notification) return std::nullopt;
        return make_error(id, -32000, e.what(), e.code());
    }
    if (notification) return std::nullopt;
    return make_result(id, std::move(result));
}

std::optional<std::string> RpcEndpoint::handle_line(const std::string& line) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) return std::nullopt;
    json request;
    try {
        request = json::parse(line);
    } catch (const json::exception&) {
        return make_error(json(nullptr), -32700, "parse error").dump();
    }
    auto response = handle_message(request);
    if (!response) return std::nullopt;
    return response->dump();
}

void serve_stream(ToolRegistry& registry, std::shared_ptr<Session> session,
                  std::istream& in, std::ostream& out) {
    RpcEndpoint endpoint(registry, std::move(session));
    std::string line;
    while (std::getline(in, line)) {
        if (auto response = endpoint.handle_line(line)) {
            out << *response << "\n";
            out.flush();
        }
    }
}

void serve_tcp(ToolRegistry& registry, const std::string& user,
               const SecurityPolicy& policy, std::uint16_t port) {
    int listener = ::socket(AF_INET, SOCK_STREAM, 0);
    if (listener < 0) throw std::runtime_error("socket() failed");
    int enable = 1;
    ::setsockopt(listener, SOL_SOCKET, SO_REUSEADDR, &enable, sizeof(enable));
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    addr.sin_port = htons(port);
    if (::bind(listener, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) < 0 ||
        ::listen(listener, 16) < 0) {
        ::close(listener);
        throw std::runtime_error("cannot listen on port " + std::to_string(port));
    }
    std::vector<std::thread> workers;
    while (true) {
        int fd = ::accept(listener, nullptr, nullptr);
        if (fd < 0) break;
        workers.emplace_back([&registry, user, policy, fd] {
            auto session = registry.open_session(user, policy);
            RpcEndpoint endpoint(registry, session);
            std::string buffer;
            char chunk[4096];
            ssize_t n;
            while ((n = ::read(fd, chunk, sizeof(chunk))) > 0) {
                buffer.append(chunk, static_cast<size_t>(n));
                size_t pos;
                while ((pos = buffer.find('\n')) != std::string::npos) {
                    std::string line = buffer.substr(0, pos);
                    buffer.erase(0, pos + 1);
                    if (auto response = endpoint.handle_line(line)) {
                        std::string out = *response + "\n";
                        size_t sent = 0;
                        while (sent < out.size()) {
                            ssize_t w = ::write(fd, out.data() + sent, out.size() - sent);
                            if (w <= 0) break;
                            sent += static_cast<size_t>(w);
                        }
                    }
                }
            }
            ::close(fd);
        });
    }
    for (auto& w : workers) w.join();
    ::close(listener);
}

}  // namespace bs
