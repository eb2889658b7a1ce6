// pair: run stop
class Engine {
    void run() {
        stop();
    }

    void stop() {
    }
}
