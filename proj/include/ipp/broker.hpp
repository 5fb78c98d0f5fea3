#pragma once

#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace ipp {

/// Publish-subscribe boundary between planners and vehicle backends.
/// Implementations must deliver messages in per-topic FIFO order.
class Broker {
 public:
  using Handler = std::function<void(const std::string& topic, const std::string& payload)>;

  virtual ~Broker() = default;
  virtual void publish(const std::string& topic, const std::string& payload) = 0;
  /// Topic filters support a single-level '+' wildcard per segment.
  virtual void subscribe(const std::string& filter, Handler handler) = 0;
};

bool topic_matches(const std::string& filter, const std::string& topic);

/// In-process broker so the whole stack runs without an external service.
/// publish() enqueues; deliver_all() dispatches queued messages in FIFO
/// order (handlers may publish more, which is delivered in the same call).
class LoopbackBroker : public Broker {
 public:
  void publish(const std::string& topic, const std::string& payload) override;
  void subscribe(const std::string& filter, Handler handler) override;

  /// Dispatches everything queued; returns the number of messages delivered.
  std::size_t deliver_all();

  /// Fault-injection hook: maps one queued message to the list actually
  /// delivered (empty = drop, repeated = duplicate). Applied at delivery.
  using Interceptor =
      std::function<std::vector<std::pair<std::string, std::string>>(const std::string& topic,
                                                                     const std::string& payload)>;
  void set_interceptor(Interceptor fn) { interceptor_ = std::move(fn); }

  /// Optional trace sink: called for every delivered message.
  using TraceSink = std::function<void(const std::string& topic, const std::string& payload)>;
  void set_trace_sink(TraceSink fn) { trace_ = std::move(fn); }

 private:
  std::mutex mu_;
  std::deque<std::pair<std::string, std::string>> queue_;
  std::vector<std::pair<std::string, Handler>> subs_;
  Interceptor interceptor_;
  TraceSink trace_;
};

}  // namespace ipp
