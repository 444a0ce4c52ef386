// Reference readability oracle for the sweep harness.
//
//   qr-decode IMAGE
//
// Prints the decoded payload of the first QR symbol found and exits 0, or
// exits 1 if nothing decodes. Exit 2 means the image could not be read.

#include <iostream>
#include <string>
#include <vector>

#include <opencv2/imgcodecs.hpp>
#include <opencv2/objdetect.hpp>
#include <opencv2/wechat_qrcode.hpp>

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: qr-decode IMAGE\n";
    return 2;
  }
  cv::Mat img = cv::imread(argv[1], cv::IMREAD_GRAYSCALE);
  if (img.empty()) {
    std::cerr << "qr-decode: cannot read " << argv[1] << "\n";
    return 2;
  }

  // Without model files the WeChat detector falls back to its classical
  // (ZXing-derived) localizer, which is what we want here.
  cv::wechat_qrcode::WeChatQRCode wechat;
  std::vector<std::string> found = wechat.detectAndDecode(img);
  for (const auto& s : found) {
    if (!s.empty()) {
      std::cout << s << "\n";
      return 0;
    }
  }

  cv::QRCodeDetector detector;
  std::string payload = detector.detectAndDecode(img);
  if (!payload.empty()) {
    std::cout << payload << "\n";
    return 0;
  }
  return 1;
}
