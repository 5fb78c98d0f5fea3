#include "ipp/broker.hpp"

namespace ipp {

bool topic_matches(const std::string& filter, const std::string& topic) {
  std::size_t fi = 0, ti = 0;
  while (fi < filter.size() || ti < topic.size()) {
    const std::size_t fe = filter.find('/', fi);
    const std::size_t te = topic.find('/', ti);
    const std::string fseg = filter.substr(fi, fe == std::string::npos ? std::string::npos : fe - fi);
    const std::string tseg = topic.substr(ti, te == std::string::npos ? std::string::npos : te - ti);
    if (fseg != "+" && fseg != tseg) return false;
    if ((fe == std::string::npos) != (te == std::string::npos)) return false;
    if (fe == std::string::npos) return true;
    fi = fe + 1;
    ti = te + 1;
  }
  return fi >= filter.size() && ti >= topic.size();
}

void LoopbackBroker::publish(const std::string& topic, const std::string& payload) {
  std::lock_guard lock(mu_);
  queue_.emplace_back(topic, payload);
}

void LoopbackBroker::subscribe(const std::string& filter, Handler handler) {
  std::lock_guard lock(mu_);
  subs_.emplace_back(filter, std::move(handler));
}

std::size_t LoopbackBroker::deliver_all() {
  std::size_t delivered = 0;
  for (;;) {
    std::pair<std::string, std::string> msg;
    {
      std::lock_guard lock(mu_);
      if (queue_.empty()) break;
      msg = std::move(queue_.front());
      queue_.pop_front();
    }
    std::vector<std::pair<std::string, std::string>> batch;
    if (interceptor_)
      batch = interceptor_(msg.first, msg.second);
    else
      batch.push_back(msg);
    for (const auto& [topic, payload] : batch) {
      if (trace_) trace_(topic, payload);
      std::vector<Handler> handlers;
      {
        std::lock_guard lock(mu_);
        for (const auto& [filter, h] : subs_)
          if (topic_matches(filter, topic)) handlers.push_back(h);
      }
      for (const auto& h : handlers) h(topic, payload);
      ++delivered;
    }
  }
  return delivered;
}

}  // namespace ipp
