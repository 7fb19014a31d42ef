/*
 * Copyright 2026 The modaudit Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef MODAUDIT_TRANSPORT_HPP_
#define MODAUDIT_TRANSPORT_HPP_

#include <string>
#include <utility>
#include <vector>

namespace modaudit {

struct HttpRequest {
  std::string url;
  std::vector<std::pair<std::string, std::string>> headers;
  std::string body;  // JSON
};

// status 0 means the request never completed (connect failure, timeout);
// callers treat it like a 5xx for retry purposes.
struct HttpResponse {
  int status = 0;
  std::string body;
};

class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  virtual HttpResponse Post(const HttpRequest& request) = 0;
};

// Real transport over cpp-httplib. Supports http:// and https:// URLs.
class HttplibTransport : public HttpTransport {
 public:
  explicit HttplibTransport(int timeout_seconds = 30)
      : timeout_seconds_(timeout_seconds) {}

  HttpResponse Post(const HttpRequest& request) override;

 private:
  int timeout_seconds_;
};

}  // namespace modaudit

#endif  // MODAUDIT_TRANSPORT_HPP_
