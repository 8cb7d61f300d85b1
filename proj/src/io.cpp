namespace zk { namespace { constexpr int placeholder_io = 0; } }
