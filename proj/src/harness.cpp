namespace zk { namespace { constexpr int placeholder_harness = 0; } }
