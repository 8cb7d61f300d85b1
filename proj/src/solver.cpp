namespace zk { namespace { constexpr int placeholder_solver = 0; } }
