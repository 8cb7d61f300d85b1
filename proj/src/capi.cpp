namespace { constexpr int placeholder = 0; }
