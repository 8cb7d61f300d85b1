namespace zk { namespace { constexpr int placeholder_experiments = 0; } }
