package metrics;

import java.util.Set;

public class GraphiteReporter {
    private Set<MetricType> getDisabledMetricTypes() {
        return null;
    }

    private void sendIfEnabled(MetricType metricType, String name, long value) {
    }
}
